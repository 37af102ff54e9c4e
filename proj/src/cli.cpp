#include "qoe/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qoe/advice_engine.hpp"
#include "qoe/analytics.hpp"
#include "qoe/collector.hpp"
#include "qoe/config.hpp"
#include "qoe/mos_model.hpp"
#include "qoe/playback_sim.hpp"
#include "qoe/report_schema.hpp"
#include "qoe/store.hpp"
#include "qoe/tcp_model.hpp"

namespace qoe::cli {

namespace {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON views of result types

ordered_json metrics_json(const sim::AppQoSMetrics& m) {
  return {{"t_init_s", m.t_init_s},
          {"f_rebuf_per_s", m.f_rebuf_per_s},
          {"t_rebuf_s", m.t_rebuf_s},
          {"n_pauses", m.n_pauses}};
}

ordered_json levels_json(const mos::QuantizedLevels& l) {
  return {{"l_ti", l.l_ti}, {"l_fr", l.l_fr}, {"l_tr", l.l_tr}};
}

ordered_json timeline_json(const sim::PlaybackTimeline& t) {
  ordered_json stalls = ordered_json::array();
  for (const auto& s : t.stalls)
    stalls.push_back({{"start_s", s.start_s}, {"duration_s", s.duration_s}});
  return {{"t_init_s", t.t_init_s},
          {"reproduction_time_s", t.reproduction_time_s},
          {"download_complete_time_s", t.download_complete_time_s},
          {"stalls", std::move(stalls)}};
}

void print_metrics(std::ostream& out, const sim::AppQoSMetrics& m) {
  out << "t_init: " << m.t_init_s << " s   f_rebuf: " << m.f_rebuf_per_s
      << " /s   t_rebuf: " << m.t_rebuf_s << " s   pauses: " << m.n_pauses << "\n";
}

// ---------------------------------------------------------------------------
// Shared option groups

struct VideoOptions {
  double media_size = 0;
  double duration = 0;
  double throttle_factor = 1.25;
  double burst_bytes = -1;
  double burst_seconds = 40;  // of media, when burst_bytes is unset

  void attach(CLI::App* cmd) {
    cmd->add_option("--media-size", media_size, "Clip size in bytes")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--duration", duration, "Clip duration in seconds")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--throttle-factor", throttle_factor,
                    "Server throttle factor over the encoding rate")
        ->capture_default_str();
    auto* bb = cmd->add_option("--burst-bytes", burst_bytes, "Initial burst size in bytes");
    cmd->add_option("--burst-s", burst_seconds,
                    "Initial burst as seconds of media (default 40, capped at the clip size)")
        ->excludes(bb);
  }

  sim::VideoProfile build() const {
    double burst = burst_bytes >= 0 ? burst_bytes
                                    : std::min(media_size, burst_seconds * media_size / duration);
    return sim::make_video_profile(media_size, duration, throttle_factor, burst);
  }
};

struct PlayerOptions {
  double startup_s = -1;
  double startup_bytes = -1;
  double resume_s = -1;
  double resume_bytes = -1;
  double capacity_bytes = -1;

  void attach(CLI::App* cmd) {
    auto* sb = cmd->add_option("--startup-bytes", startup_bytes, "Startup threshold in bytes");
    cmd->add_option("--startup-s", startup_s, "Startup threshold in seconds of media")
        ->excludes(sb);
    auto* rb = cmd->add_option("--resume-bytes", resume_bytes, "Resume threshold in bytes");
    cmd->add_option("--resume-s", resume_s, "Resume threshold in seconds of media")->excludes(rb);
    cmd->add_option("--capacity", capacity_bytes, "Player buffer capacity in bytes (default: unbounded)");
  }

  sim::PlayerConfig build(const config::PlayerDefaults& defaults,
                          const sim::VideoProfile& video) const {
    config::PlayerDefaults d = defaults;
    if (startup_bytes >= 0) d.startup_bytes = startup_bytes;
    if (startup_s >= 0) {
      d.startup_media_seconds = startup_s;
      d.startup_bytes.reset();
    }
    if (resume_bytes >= 0) d.resume_bytes = resume_bytes;
    if (resume_s >= 0) {
      d.resume_media_seconds = resume_s;
      d.resume_bytes.reset();
    }
    if (capacity_bytes >= 0) d.buffer_capacity_bytes = capacity_bytes;
    return config::player_config_for(d, video);
  }
};

std::optional<mos::TechnologyScope> scope_from_name(const std::string& name) {
  if (name == "all") return mos::TechnologyScope::All;
  if (name == "wifi") return mos::TechnologyScope::Wifi;
  if (name == "umts") return mos::TechnologyScope::Umts;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// advise input

advice::ConnectionKind connection_kind_from(const std::string& s) {
  if (s == "wifi") return advice::ConnectionKind::Wifi;
  if (s == "cellular") return advice::ConnectionKind::Cellular;
  if (s == "none") return advice::ConnectionKind::None;
  throw ParseError("connection_kind must be wifi, cellular or none");
}

advice::PowerProfile power_profile_from(const std::string& s) {
  if (s == "performance") return advice::PowerProfile::Performance;
  if (s == "balanced") return advice::PowerProfile::Balanced;
  if (s == "power_save") return advice::PowerProfile::PowerSave;
  throw ParseError("power_profile must be performance, balanced or power_save");
}

advice::TrafficLevel traffic_level_from(const std::string& s) {
  if (s == "high") return advice::TrafficLevel::High;
  if (s == "low") return advice::TrafficLevel::Low;
  throw ParseError("network_traffic_level must be high or low");
}

// Strict reader: missing keys keep defaults, unknown keys are rejected.
class SnapshotReader {
 public:
  SnapshotReader(const nlohmann::json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j.is_object()) throw ParseError(name_ + " must be a JSON object");
  }

  template <typename T>
  void read(const char* key, T& dst) {
    seen_.push_back(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      dst = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ParseError(name_ + "." + key + " has the wrong type");
    }
  }

  template <typename T, typename Fn>
  void read_enum(const char* key, T& dst, Fn fn) {
    std::string raw;
    bool present = false;
    seen_.push_back(key);
    const auto it = j_.find(key);
    if (it != j_.end()) {
      if (!it->is_string()) throw ParseError(name_ + "." + key + " must be a string");
      raw = it->get<std::string>();
      present = true;
    }
    if (present) dst = fn(raw);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
        throw ParseError("unknown field: " + name_ + "." + key);
    }
  }

 private:
  const nlohmann::json& j_;
  std::string name_;
  std::vector<std::string> seen_;
};

std::pair<advice::DeviceState, advice::SessionContext> parse_advise_input(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("advise input is not valid JSON");

  advice::DeviceState device;
  advice::SessionContext session;
  SnapshotReader root(j, "input");
  if (const auto it = j.find("device"); it != j.end()) {
    SnapshotReader d(*it, "device");
    d.read_enum("connection_kind", device.connection_kind, connection_kind_from);
    d.read("locked_on_2g", device.locked_on_2g);
    d.read("rssi_dbm", device.rssi_dbm);
    d.read("wifi_available", device.wifi_available);
    d.read("wifi_enabled", device.wifi_enabled);
    d.read("bluetooth_enabled", device.bluetooth_enabled);
    d.read("wifi_tethering", device.wifi_tethering);
    d.read("syncing_apps", device.syncing_apps);
    d.read("running_apps", device.running_apps);
    d.read("hungry_app_detected", device.hungry_app_detected);
    d.read("low_memory", device.low_memory);
    d.read("cpu_load_high", device.cpu_load_high);
    d.read("cpu_freq_low", device.cpu_freq_low);
    d.read("battery_level", device.battery_level);
    d.read("battery_temp_high", device.battery_temp_high);
    d.read_enum("power_profile", device.power_profile, power_profile_from);
    d.read("device_capability_index", device.device_capability_index);
    d.read_enum("network_traffic_level", device.network_traffic_level, traffic_level_from);
    d.reject_unknown();
  }
  if (const auto it = j.find("session"); it != j.end()) {
    SnapshotReader s(*it, "session");
    s.read("measured_throughput_Bps", session.measured_throughput_Bps);
    s.read("video_requirement_index", session.video_requirement_index);
    s.read("video_resolution_low", session.video_resolution_low);
    s.read("video_coding_rate_Bps", session.video_coding_rate_Bps);
    s.reject_unknown();
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "device" && key != "session") throw ParseError("unknown field: " + key);
  }
  return {device, session};
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// calibrate input: CSV "model_mos,reported_mos"

std::pair<std::vector<double>, std::vector<double>> read_mos_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("mos pair CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "model_mos,reported_mos")
    throw ParseError("mos pair CSV header must be \"model_mos,reported_mos\"");
  std::vector<double> model, reported;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("mos pair CSV line " + std::to_string(line_no) + ": expected two columns");
    try {
      model.push_back(std::stod(line.substr(0, comma)));
      reported.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError("mos pair CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return {std::move(model), std::move(reported)};
}

// ---------------------------------------------------------------------------

struct MosOutput {
  mos::QuantizedLevels levels;
  mos::MosScore base;
  std::optional<mos::MosScore> calibrated;
  double slope = 0;
  std::string technology;
};

MosOutput score_metrics(const sim::AppQoSMetrics& metrics, const config::PipelineConfig& cfg,
                        const std::string& technology, bool calibrate) {
  const auto scope = scope_from_name(technology);
  if (!scope) throw ParamError("technology must be all, wifi or umts");
  MosOutput o;
  o.levels = mos::quantize(metrics, cfg.quantization);
  o.base = mos::mos_base(o.levels, cfg.mos);
  o.technology = technology;
  o.slope = config::slope_for(cfg.calibration, *scope);
  if (calibrate) o.calibrated = mos::mos_calibrated(o.base, {o.slope, *scope});
  return o;
}

ordered_json mos_json(const MosOutput& o) {
  ordered_json j;
  j["levels"] = levels_json(o.levels);
  j["mos_base"] = o.base.value;
  if (o.calibrated) {
    j["mos_calibrated"] = o.calibrated->value;
    j["calibration"] = {{"slope", o.slope}, {"technology", o.technology}};
  }
  return j;
}

void print_mos(std::ostream& out, const MosOutput& o) {
  out << "levels: ti=" << o.levels.l_ti << " fr=" << o.levels.l_fr << " tr=" << o.levels.l_tr
      << "\n";
  out << "MOS (base): " << o.base.value << "\n";
  if (o.calibrated)
    out << "MOS (calibrated, slope " << o.slope << ", " << o.technology
        << "): " << o.calibrated->value << "\n";
}

void write_trajectory_csv(const std::string& path, const sim::PlaybackTimeline& timeline) {
  std::ofstream out(path);
  if (!out) throw StoreError("cannot write trajectory file: " + path);
  out << "t_s,downloaded_bytes,played_bytes,buffered_bytes\n";
  for (const auto& s : timeline.buffer_trajectory)
    out << s.t_s << ',' << s.downloaded_bytes << ',' << s.played_bytes << ','
        << s.buffered_bytes << "\n";
}

void write_residuals_csv(const std::string& path, const analytics::ResidualReport& rr) {
  std::ofstream out(path);
  if (!out) throw StoreError("cannot write residuals file: " + path);
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < rr.counts.size(); ++i)
    out << rr.bin_edges[i] << ',' << rr.bin_edges[i + 1] << ',' << rr.counts[i] << "\n";
}

void stats_csv(std::ostream& out, const collector::StatsResult& result) {
  if (result.metric == collector::StatsMetric::Mos) {
    out << "group,n,percent_mos_1,percent_mos_2,percent_mos_3,percent_mos_4,percent_mos_5,"
           "average,std_dev\n";
    for (const auto& row : result.distribution) {
      out << row.group << ',' << row.n;
      for (double p : row.percent) out << ',' << p;
      out << ',' << row.average << ',' << row.std_dev << "\n";
    }
    return;
  }
  out << "group,n,mean,median,std_dev,min,max,cv\n";
  for (const auto& g : result.groups) {
    out << g.group << ',' << g.n << ',' << g.summary.mean << ',' << g.summary.median << ','
        << g.summary.std_dev << ',' << g.summary.min << ',' << g.summary.max << ',';
    if (g.summary.cv) out << *g.summary.cv;
    out << "\n";
  }
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"QoE estimation toolkit for HTTP progressive-download video"};
  app.name("qoe");

  std::string config_path;
  bool json_output = false;
  bool show_config = false;
  app.add_option("--config", config_path, "Pipeline config file (JSON)")
      ->envname("QOE_CONFIG");
  app.add_flag("--json", json_output, "Machine-readable JSON output");
  app.add_flag("--show-config", show_config, "Print the effective config and exit");

  // estimate ----------------------------------------------------------------
  auto* estimate = app.add_subcommand(
      "estimate", "Network QoS -> throughput -> app metrics -> MOS");
  estimate->fallthrough();
  double bandwidth = 0, rtt = 0, loss = 0, direct_throughput = -1;
  VideoOptions est_video;
  PlayerOptions est_player;
  std::string est_technology = "all";
  bool est_no_calibration = false;
  auto* bw_opt = estimate->add_option("--bandwidth", bandwidth, "Link bandwidth in bytes/s");
  auto* rtt_opt = estimate->add_option("--rtt", rtt, "Round-trip time in seconds");
  estimate->add_option("--loss", loss, "Packet loss rate in [0, 1)")->capture_default_str();
  estimate
      ->add_option("--throughput", direct_throughput,
                   "Measured average TCP throughput in bytes/s; bypasses the TCP model")
      ->excludes(bw_opt)
      ->excludes(rtt_opt);
  est_video.attach(estimate);
  est_player.attach(estimate);
  estimate->add_option("--technology", est_technology, "Calibration slope scope: all|wifi|umts")
      ->capture_default_str();
  estimate->add_flag("--no-calibration", est_no_calibration, "Report the base MOS only");

  // simulate ----------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "Replay a bandwidth trace through the player");
  simulate->fallthrough();
  std::string trace_path, trajectory_out;
  VideoOptions sim_video;
  PlayerOptions sim_player;
  simulate->add_option("--trace", trace_path, "Bandwidth trace CSV (time_s,rate_Bps)")
      ->required();
  sim_video.attach(simulate);
  sim_player.attach(simulate);
  simulate->add_option("--trajectory-out", trajectory_out,
                       "Write the buffer trajectory to this CSV file");

  // score -------------------------------------------------------------------
  auto* score = app.add_subcommand("score", "Map measured app metrics to MOS");
  score->fallthrough();
  sim::AppQoSMetrics score_in;
  int score_pauses = -1;
  std::string score_technology = "all";
  bool score_no_calibration = false;
  score->add_option("--t-init", score_in.t_init_s, "Initial buffering time in seconds")
      ->required();
  score->add_option("--f-rebuf", score_in.f_rebuf_per_s, "Rebuffering frequency in events/s")
      ->required();
  score->add_option("--t-rebuf", score_in.t_rebuf_s, "Mean rebuffering time in seconds")
      ->required();
  score->add_option("--n-pauses", score_pauses, "Number of pauses (default: derived)");
  score->add_option("--technology", score_technology, "Calibration slope scope: all|wifi|umts")
      ->capture_default_str();
  score->add_flag("--no-calibration", score_no_calibration, "Report the base MOS only");

  // advise ------------------------------------------------------------------
  auto* advise = app.add_subcommand("advise", "Diagnose causes of low QoE from a device snapshot");
  advise->fallthrough();
  std::string advise_input = "-";
  advise->add_option("--input", advise_input, "Device/session JSON file, or - for stdin")
      ->capture_default_str();

  // ingest ------------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "Append a JSONL report file to the store");
  ingest->fallthrough();
  std::string ingest_input, ingest_store;
  ingest->add_option("--input", ingest_input, "Report JSONL file")->required();
  ingest->add_option("--store", ingest_store, "Store path (default: from config)");

  // stats -------------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "Aggregate stored reports");
  stats->fallthrough();
  std::string stats_metric, stats_group_by, stats_store;
  bool stats_ecdf = false, stats_as_csv = false;
  stats->add_option("--metric", stats_metric, "t_init | f_rebuf | t_rebuf | mos")->required();
  stats->add_option("--group-by", stats_group_by, "technology");
  stats->add_option("--store", stats_store, "Store path (default: from config)");
  stats->add_flag("--ecdf", stats_ecdf, "Emit the empirical CDF instead of summaries");
  stats->add_flag("--csv", stats_as_csv, "CSV output");

  // calibrate ---------------------------------------------------------------
  auto* calibrate =
      app.add_subcommand("calibrate", "Fit a through-origin slope on model/reported MOS pairs");
  calibrate->fallthrough();
  std::string calibrate_input, residuals_out;
  calibrate->add_option("--input", calibrate_input, "CSV file (model_mos,reported_mos)")
      ->required();
  calibrate->add_option("--residuals-out", residuals_out,
                        "Write the model-minus-reported residual histogram to this CSV file");

  // serve -------------------------------------------------------------------
  auto* serve = app.add_subcommand("serve", "Run the QoE collector service");
  serve->fallthrough();
  std::string serve_listen, serve_store;
  serve->add_option("--listen", serve_listen, "host:port (default: from config)");
  serve->add_option("--store", serve_store, "Store path (default: from config)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return e.get_exit_code();
  }

  try {
    const config::PipelineConfig cfg =
        config_path.empty() ? config::PipelineConfig{} : config::load_file(config_path);

    if (show_config) {
      out << config::to_json(cfg).dump(2) << "\n";
      return 0;
    }

    if (estimate->parsed()) {
      double throughput = direct_throughput;
      if (throughput < 0) {
        if (bw_opt->count() == 0 || rtt_opt->count() == 0)
          throw ParamError("estimate needs --bandwidth and --rtt, or --throughput");
        const tcp::NetworkQoS qos{bandwidth, rtt, loss};
        throughput = tcp::steady_state_throughput(qos, config::tcp_params_for(cfg.tcp, rtt));
      }
      const auto video = est_video.build();
      const auto player = est_player.build(cfg.player, video);
      const auto metrics = sim::estimate_metrics_from_averages(throughput, video, player);
      const auto mos_out = score_metrics(metrics, cfg, est_technology, !est_no_calibration);
      if (json_output) {
        ordered_json j;
        j["throughput_Bps"] = throughput;
        j["metrics"] = metrics_json(metrics);
        j.update(mos_json(mos_out));
        out << j.dump(2) << "\n";
      } else {
        out << "throughput: " << throughput << " B/s\n";
        print_metrics(out, metrics);
        print_mos(out, mos_out);
      }
      return 0;
    }

    if (simulate->parsed()) {
      const auto trace = sim::BandwidthTrace::from_csv_file(trace_path);
      const auto video = sim_video.build();
      const auto player = sim_player.build(cfg.player, video);
      const auto timeline = sim::simulate_session(trace, video, player);
      const auto metrics = sim::extract_metrics(timeline);
      if (!trajectory_out.empty()) write_trajectory_csv(trajectory_out, timeline);
      if (json_output) {
        ordered_json j;
        j["timeline"] = timeline_json(timeline);
        j["metrics"] = metrics_json(metrics);
        out << j.dump(2) << "\n";
      } else {
        out << "t_init: " << timeline.t_init_s
            << " s   reproduction: " << timeline.reproduction_time_s
            << " s   download done: " << timeline.download_complete_time_s << " s   stalls: "
            << timeline.stalls.size() << "\n";
        print_metrics(out, metrics);
      }
      return 0;
    }

    if (score->parsed()) {
      score_in.n_pauses = score_pauses >= 0 ? score_pauses
                                            : (score_in.f_rebuf_per_s > 0 ? 1 : 0);
      const auto mos_out = score_metrics(score_in, cfg, score_technology, !score_no_calibration);
      if (json_output) {
        out << mos_json(mos_out).dump(2) << "\n";
      } else {
        print_mos(out, mos_out);
      }
      return 0;
    }

    if (advise->parsed()) {
      const auto [device, session] = parse_advise_input(read_input(advise_input));
      const auto diagnoses = advice::diagnose(device, session, cfg.advice);
      if (json_output) {
        ordered_json j;
        j["diagnoses"] = ordered_json::array();
        for (const auto& d : diagnoses)
          j["diagnoses"].push_back(
              {{"cause", advice::to_string(d.cause)}, {"advice", d.advice}});
        out << j.dump(2) << "\n";
      } else if (diagnoses.empty()) {
        out << "no causes of low QoE detected\n";
      } else {
        for (const auto& d : diagnoses)
          out << advice::to_string(d.cause) << ": " << d.advice << "\n";
      }
      return 0;
    }

    if (ingest->parsed()) {
      store::ReportStore st(ingest_store.empty() ? cfg.store_path : ingest_store);
      std::ifstream in(ingest_input);
      if (!in) throw ParseError("cannot open input file: " + ingest_input);
      ordered_json results = ordered_json::array();
      std::size_t accepted = 0, rejected = 0, line_no = 0;
      std::string line;
      while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ordered_json entry;
        entry["line"] = line_no;
        try {
          const auto result = st.ingest_text(line);
          if (result.accepted) {
            ++accepted;
            entry["status"] = "accepted";
            entry["seq"] = result.seq;
          } else {
            ++rejected;
            entry["status"] = "rejected";
            entry["violations"] = ordered_json::array();
            for (const auto& v : result.violations)
              entry["violations"].push_back({{"field", v.field}, {"message", v.message}});
          }
        } catch (const ParseError& e) {
          ++rejected;
          entry["status"] = "malformed";
          entry["error"] = e.what();
        }
        results.push_back(std::move(entry));
      }
      if (json_output) {
        ordered_json j;
        j["accepted"] = accepted;
        j["rejected"] = rejected;
        j["results"] = std::move(results);
        out << j.dump(2) << "\n";
      } else {
        out << "accepted " << accepted << ", rejected " << rejected << " (store: "
            << st.path().string() << ", last seq " << st.last_seq() << ")\n";
        for (const auto& entry : results) {
          if (entry["status"] == "accepted") continue;
          out << "line " << entry["line"] << ": " << entry["status"].get<std::string>() << "\n";
        }
      }
      return rejected == 0 ? 0 : 1;
    }

    if (stats->parsed()) {
      const auto metric = collector::stats_metric_from_name(stats_metric);
      if (!metric) throw ParamError("metric must be one of t_init, f_rebuf, t_rebuf, mos");
      if (!stats_group_by.empty() && stats_group_by != "technology")
        throw ParamError("group_by must be technology");
      const bool grouped = stats_group_by == "technology";
      store::ReportStore st(stats_store.empty() ? cfg.store_path : stats_store);

      if (stats_ecdf) {
        const auto series = collector::query_ecdf(st, *metric, grouped);
        if (json_output) {
          ordered_json j;
          j["metric"] = collector::to_string(*metric);
          j["series"] = ordered_json::array();
          for (const auto& s : series)
            j["series"].push_back({{"group", s.group}, {"values", s.sorted_values}});
          out << j.dump(2) << "\n";
        } else {
          out << "group,x,F\n";
          for (const auto& s : series) {
            const double n = static_cast<double>(s.sorted_values.size());
            for (std::size_t i = 0; i < s.sorted_values.size(); ++i)
              out << s.group << ',' << s.sorted_values[i] << ','
                  << (static_cast<double>(i + 1) / n) << "\n";
          }
        }
        return 0;
      }

      const auto result = collector::query_stats(st, *metric, grouped);
      if (json_output) {
        out << collector::to_json(result).dump(2) << "\n";
      } else if (stats_as_csv) {
        stats_csv(out, result);
      } else {
        out << collector::to_json(result).dump(2) << "\n";
      }
      return 0;
    }

    if (calibrate->parsed()) {
      const auto [model, reported] = read_mos_pairs(calibrate_input);
      const auto fit = analytics::fit_through_origin(model, reported);
      const auto rr = analytics::residuals(model, reported, {});
      if (!residuals_out.empty()) write_residuals_csv(residuals_out, rr);
      if (json_output) {
        ordered_json j;
        j["slope"] = fit.slope;
        j["r_squared"] = fit.r_squared;
        j["pearson_r"] = fit.pearson_r;
        j["n"] = fit.n;
        j["frac_within_half"] = rr.frac_within_half;
        j["frac_model_below_reported"] = rr.frac_model_below_reported;
        out << j.dump(2) << "\n";
      } else {
        out << "slope: " << fit.slope << "   r_squared: " << fit.r_squared
            << "   pearson_r: " << fit.pearson_r << "   n: " << fit.n << "\n";
        out << "residuals: " << 100 * rr.frac_within_half << "% within +/-0.5, "
            << 100 * rr.frac_model_below_reported << "% with model below reported\n";
      }
      return 0;
    }

    if (serve->parsed()) {
      const auto [host, port] = collector::parse_listen_address(
          serve_listen.empty() ? cfg.listen_address : serve_listen);
      store::ReportStore st(serve_store.empty() ? cfg.store_path : serve_store);
      collector::CollectorServer server(st);
      out << "qoe collector listening on " << host << ":" << port << ", store at "
          << st.path().string() << "\n"
          << std::flush;
      if (!server.listen(host, port)) {
        err << "cannot bind " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }

    err << app.help();
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  return run(std::move(args), out, err);
}

}  // namespace qoe::cli
