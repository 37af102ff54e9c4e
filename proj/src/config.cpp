#include "qoe/config.hpp"

#include <algorithm>
#include <fstream>

namespace qoe::config {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads known keys from an object, rejecting anything unrecognized so a typo
// in a config file cannot silently fall back to a default.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j.is_object()) throw ParseError("config section " + name_ + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& dst) {
    const auto it = j_.find(key);
    seen_.push_back(key);
    if (it == j_.end()) return;
    try {
      dst = it->get<T>();
    } catch (const json::exception&) {
      throw ParseError("config key " + name_ + "." + key + " has the wrong type");
    }
  }

  template <typename T>
  void read(const char* key, std::optional<T>& dst) {
    const auto it = j_.find(key);
    seen_.push_back(key);
    if (it == j_.end() || it->is_null()) return;
    try {
      dst = it->get<T>();
    } catch (const json::exception&) {
      throw ParseError("config key " + name_ + "." + key + " has the wrong type");
    }
  }

  void read_pair(const char* key, std::array<double, 2>& dst) {
    const auto it = j_.find(key);
    seen_.push_back(key);
    if (it == j_.end()) return;
    if (!it->is_array() || it->size() != 2)
      throw ParseError("config key " + name_ + "." + key + " must be [lower, upper]");
    dst = {it->at(0).get<double>(), it->at(1).get<double>()};
  }

  const json* subsection(const char* key) {
    const auto it = j_.find(key);
    seen_.push_back(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
        throw ParseError("unknown config key: " + name_ + "." + key);
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::vector<std::string> seen_;
};

}  // namespace

void validate(const PipelineConfig& cfg) {
  if (!(cfg.tcp.mss_bytes > 0) || !(cfg.tcp.max_window_bytes >= cfg.tcp.mss_bytes) ||
      !(cfg.tcp.acked_per_ack > 0))
    throw ParamError("invalid tcp defaults");
  if (cfg.tcp.rto_s && !(*cfg.tcp.rto_s > 0)) throw ParamError("tcp.rto must be > 0");
  if (!(cfg.player.startup_media_seconds > 0)) throw ParamError("player.startup must be > 0");
  if (cfg.player.resume_media_seconds && !(*cfg.player.resume_media_seconds > 0))
    throw ParamError("player.resume must be > 0");
  if (cfg.player.startup_bytes && !(*cfg.player.startup_bytes > 0))
    throw ParamError("player.startup_bytes must be > 0");
  if (cfg.player.resume_bytes && !(*cfg.player.resume_bytes > 0))
    throw ParamError("player.resume_bytes must be > 0");
  if (!(cfg.player.buffer_capacity_bytes > 0)) throw ParamError("player.capacity must be > 0");
  mos::validate(cfg.quantization);
  mos::validate(cfg.mos);
  for (double s : {cfg.calibration.all, cfg.calibration.wifi, cfg.calibration.umts})
    if (!(s > 0)) throw ParamError("calibration slopes must be > 0");
  advice::validate(cfg.advice);
}

nlohmann::ordered_json to_json(const PipelineConfig& cfg) {
  ordered_json j;
  j["tcp"] = {{"mss_bytes", cfg.tcp.mss_bytes},
              {"max_window_bytes", cfg.tcp.max_window_bytes},
              {"acked_per_ack", cfg.tcp.acked_per_ack},
              {"rto_s", cfg.tcp.rto_s ? json(*cfg.tcp.rto_s) : json(nullptr)}};
  j["player"] = {
      {"startup_media_seconds", cfg.player.startup_media_seconds},
      {"resume_media_seconds",
       cfg.player.resume_media_seconds ? json(*cfg.player.resume_media_seconds) : json(nullptr)},
      {"startup_bytes", cfg.player.startup_bytes ? json(*cfg.player.startup_bytes) : json(nullptr)},
      {"resume_bytes", cfg.player.resume_bytes ? json(*cfg.player.resume_bytes) : json(nullptr)},
      {"buffer_capacity_bytes", std::isfinite(cfg.player.buffer_capacity_bytes)
                                    ? json(cfg.player.buffer_capacity_bytes)
                                    : json(nullptr)}};
  j["quantization"] = {{"t_init_s", cfg.quantization.t_init_bounds_s},
                       {"f_rebuf_per_s", cfg.quantization.f_rebuf_bounds_per_s},
                       {"t_rebuf_s", cfg.quantization.t_rebuf_bounds_s}};
  j["mos"] = {{"intercept", cfg.mos.intercept},
              {"c_ti", cfg.mos.c_ti},
              {"c_fr", cfg.mos.c_fr},
              {"c_tr", cfg.mos.c_tr}};
  j["calibration"] = {{"all", cfg.calibration.all},
                      {"wifi", cfg.calibration.wifi},
                      {"umts", cfg.calibration.umts}};
  j["advice"] = {{"rssi_low_cellular_dbm", cfg.advice.rssi_low_cellular_dbm},
                 {"rssi_low_wifi_dbm", cfg.advice.rssi_low_wifi_dbm},
                 {"many_apps", cfg.advice.many_apps},
                 {"battery_low_percent", cfg.advice.battery_low_percent},
                 {"throughput_margin", cfg.advice.throughput_margin}};
  j["store_path"] = cfg.store_path;
  j["listen_address"] = cfg.listen_address;
  return j;
}

PipelineConfig from_json(const nlohmann::json& j) {
  PipelineConfig cfg;
  Section root(j, "config");
  if (const json* tcp = root.subsection("tcp")) {
    Section s(*tcp, "tcp");
    s.read("mss_bytes", cfg.tcp.mss_bytes);
    s.read("max_window_bytes", cfg.tcp.max_window_bytes);
    s.read("acked_per_ack", cfg.tcp.acked_per_ack);
    s.read("rto_s", cfg.tcp.rto_s);
    s.reject_unknown();
  }
  if (const json* player = root.subsection("player")) {
    Section s(*player, "player");
    s.read("startup_media_seconds", cfg.player.startup_media_seconds);
    s.read("resume_media_seconds", cfg.player.resume_media_seconds);
    s.read("startup_bytes", cfg.player.startup_bytes);
    s.read("resume_bytes", cfg.player.resume_bytes);
    std::optional<double> capacity;
    s.read("buffer_capacity_bytes", capacity);
    if (capacity) cfg.player.buffer_capacity_bytes = *capacity;
    s.reject_unknown();
  }
  if (const json* q = root.subsection("quantization")) {
    Section s(*q, "quantization");
    s.read_pair("t_init_s", cfg.quantization.t_init_bounds_s);
    s.read_pair("f_rebuf_per_s", cfg.quantization.f_rebuf_bounds_per_s);
    s.read_pair("t_rebuf_s", cfg.quantization.t_rebuf_bounds_s);
    s.reject_unknown();
  }
  if (const json* m = root.subsection("mos")) {
    Section s(*m, "mos");
    s.read("intercept", cfg.mos.intercept);
    s.read("c_ti", cfg.mos.c_ti);
    s.read("c_fr", cfg.mos.c_fr);
    s.read("c_tr", cfg.mos.c_tr);
    s.reject_unknown();
  }
  if (const json* c = root.subsection("calibration")) {
    Section s(*c, "calibration");
    s.read("all", cfg.calibration.all);
    s.read("wifi", cfg.calibration.wifi);
    s.read("umts", cfg.calibration.umts);
    s.reject_unknown();
  }
  if (const json* a = root.subsection("advice")) {
    Section s(*a, "advice");
    s.read("rssi_low_cellular_dbm", cfg.advice.rssi_low_cellular_dbm);
    s.read("rssi_low_wifi_dbm", cfg.advice.rssi_low_wifi_dbm);
    s.read("many_apps", cfg.advice.many_apps);
    s.read("battery_low_percent", cfg.advice.battery_low_percent);
    s.read("throughput_margin", cfg.advice.throughput_margin);
    s.reject_unknown();
  }
  root.read("store_path", cfg.store_path);
  root.read("listen_address", cfg.listen_address);
  root.reject_unknown();
  validate(cfg);
  return cfg;
}

PipelineConfig load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("config file is not valid JSON: " + path);
  return from_json(j);
}

tcp::TcpParams tcp_params_for(const TcpDefaults& tcp, double rtt_s) {
  tcp::TcpParams p = tcp::default_tcp_params(rtt_s);
  p.mss_bytes = tcp.mss_bytes;
  p.max_window_bytes = tcp.max_window_bytes;
  p.acked_per_ack = tcp.acked_per_ack;
  if (tcp.rto_s) p.rto_s = *tcp.rto_s;
  return p;
}

sim::PlayerConfig player_config_for(const PlayerDefaults& player, const sim::VideoProfile& video) {
  sim::PlayerConfig p;
  p.startup_threshold_bytes = player.startup_bytes
                                  ? *player.startup_bytes
                                  : player.startup_media_seconds * video.encoding_rate_Bps;
  if (player.resume_bytes) {
    p.resume_threshold_bytes = *player.resume_bytes;
  } else if (player.resume_media_seconds) {
    p.resume_threshold_bytes = *player.resume_media_seconds * video.encoding_rate_Bps;
  } else {
    p.resume_threshold_bytes = p.startup_threshold_bytes;
  }
  p.buffer_capacity_bytes = player.buffer_capacity_bytes;
  return p;
}

double slope_for(const CalibrationSet& cal, mos::TechnologyScope scope) {
  switch (scope) {
    case mos::TechnologyScope::All: return cal.all;
    case mos::TechnologyScope::Wifi: return cal.wifi;
    case mos::TechnologyScope::Umts: return cal.umts;
  }
  return cal.all;
}

}  // namespace qoe::config
