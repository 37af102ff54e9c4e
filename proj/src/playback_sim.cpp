#include "qoe/playback_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace qoe::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Whole-token number parse: rejects trailing garbage, allows surrounding
// whitespace.
double parse_number(const std::string& token) {
  std::size_t used = 0;
  const double v = std::stod(token, &used);
  while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
  if (used != token.size()) throw std::invalid_argument("trailing characters");
  return v;
}

double byte_tolerance(const VideoProfile& video, const PlayerConfig& player) {
  // Well below one byte for realistic sizes, and always well below the player
  // thresholds so threshold comparisons cannot oscillate.
  const double scale = 1e-9 * std::max(1.0, video.media_size_bytes);
  const double thresh = std::min(player.startup_threshold_bytes, player.resume_threshold_bytes);
  return std::min(scale, 0.25 * thresh);
}

double send_rate(double bandwidth_Bps, double bytes_sent, bool throttling, double throttle_target,
                 const VideoProfile& video, double tol) {
  if (bytes_sent >= video.media_size_bytes - tol) return 0.0;
  if (!throttling) return bandwidth_Bps;
  if (throttle_target - bytes_sent > tol) return bandwidth_Bps;  // backlog catch-up
  return std::min(bandwidth_Bps, video.throttle_factor * video.encoding_rate_Bps);
}

}  // namespace

VideoProfile make_video_profile(double media_size_bytes, double duration_s, double throttle_factor,
                                double initial_burst_bytes) {
  VideoProfile v;
  v.media_size_bytes = media_size_bytes;
  v.duration_s = duration_s;
  v.encoding_rate_Bps = duration_s > 0 ? media_size_bytes / duration_s : 0;
  v.throttle_factor = throttle_factor;
  v.initial_burst_bytes = initial_burst_bytes;
  validate(v);
  return v;
}

void validate(const VideoProfile& video) {
  if (!(video.media_size_bytes > 0)) throw ParamError("media_size must be > 0");
  if (!(video.duration_s > 0)) throw ParamError("duration must be > 0");
  if (!(video.encoding_rate_Bps > 0)) throw ParamError("encoding_rate must be > 0");
  const double err = std::abs(video.encoding_rate_Bps * video.duration_s - video.media_size_bytes);
  if (err > 1e-6 * video.media_size_bytes)
    throw ParamError("encoding_rate * duration must equal media_size");
  if (!(video.throttle_factor >= 1)) throw ParamError("throttle_factor must be >= 1");
  if (video.initial_burst_bytes < 0 || video.initial_burst_bytes > video.media_size_bytes)
    throw ParamError("initial_burst must be in [0, media_size]");
}

void validate(const PlayerConfig& player) {
  if (!(player.startup_threshold_bytes > 0)) throw ParamError("startup_threshold must be > 0");
  if (!(player.resume_threshold_bytes > 0)) throw ParamError("resume_threshold must be > 0");
  if (player.startup_threshold_bytes > player.buffer_capacity_bytes)
    throw ParamError("startup_threshold must be <= buffer_capacity");
  if (player.resume_threshold_bytes > player.buffer_capacity_bytes)
    throw ParamError("resume_threshold must be <= buffer_capacity");
}

BandwidthTrace::BandwidthTrace(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ParamError("trace must have at least one segment");
  if (segments_.front().start_s != 0.0) throw ParamError("trace must start at time 0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!std::isfinite(s.start_s) || !std::isfinite(s.rate_Bps))
      throw ParamError("trace values must be finite");
    if (s.rate_Bps < 0) throw ParamError("trace rates must be >= 0");
    if (i > 0 && !(s.start_s > segments_[i - 1].start_s))
      throw ParamError("trace start times must be strictly increasing");
  }
}

BandwidthTrace BandwidthTrace::constant(double rate_Bps) {
  return BandwidthTrace({{0.0, rate_Bps}});
}

BandwidthTrace BandwidthTrace::from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trace CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time_s,rate_Bps")
    throw ParseError("trace CSV header must be \"time_s,rate_Bps\", got \"" + line + "\"");

  std::vector<Segment> segments;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("trace CSV line " + std::to_string(line_no) + ": expected two columns");
    try {
      const double t = parse_number(line.substr(0, comma));
      const double r = parse_number(line.substr(comma + 1));
      segments.push_back({t, r});
    } catch (const std::exception&) {
      throw ParseError("trace CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  try {
    return BandwidthTrace(std::move(segments));
  } catch (const ParamError& e) {
    throw ParseError(std::string("trace CSV invalid: ") + e.what());
  }
}

BandwidthTrace BandwidthTrace::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file: " + path);
  return from_csv(in);
}

double BandwidthTrace::rate_at(double t_s) const {
  if (t_s < 0) throw ParamError("trace queried at negative time");
  return segments_[segment_index_at(t_s)].rate_Bps;
}

std::size_t BandwidthTrace::segment_index_at(double t_s) const {
  std::size_t i = 0;
  while (i + 1 < segments_.size() && segments_[i + 1].start_s <= t_s) ++i;
  return i;
}

double BandwidthTrace::segment_end(std::size_t i) const {
  return i + 1 < segments_.size() ? segments_[i + 1].start_s : kInf;
}

double server_send_rate(double t_s, const ServerState& state, const BandwidthTrace& trace,
                        const VideoProfile& video) {
  validate(video);
  if (t_s < 0) throw ParamError("t must be >= 0");
  const double tol = 1e-9 * std::max(1.0, video.media_size_bytes);
  const bool throttling = state.bytes_sent >= video.initial_burst_bytes;
  return send_rate(trace.rate_at(t_s), state.bytes_sent, throttling, state.throttle_target, video,
                   tol);
}

PlaybackTimeline simulate_session(const BandwidthTrace& trace, const VideoProfile& video,
                                  const PlayerConfig& player) {
  validate(video);
  validate(player);

  const double media = video.media_size_bytes;
  const double enc = video.encoding_rate_Bps;
  const double throttle_rate = video.throttle_factor * enc;
  const double burst = video.initial_burst_bytes;
  const double startup = player.startup_threshold_bytes;
  const double resume = player.resume_threshold_bytes;
  const double capacity = player.buffer_capacity_bytes;
  const double tol = byte_tolerance(video, player);

  enum class Phase { Waiting, Playing, Stalled, Finished };

  double t = 0;
  double downloaded = 0;
  double played = 0;
  bool throttling = burst <= 0;
  double target = 0;  // cumulative bytes the throttle schedule wanted sent
  Phase phase = Phase::Waiting;
  bool download_done = false;
  double open_stall_start = -1;

  PlaybackTimeline out;
  out.buffer_trajectory.push_back({0, 0, 0, 0});

  const auto& segs = trace.segments();
  std::size_t seg = 0;

  for (long iter = 0; phase != Phase::Finished; ++iter) {
    if (iter > 100'000'000) throw std::runtime_error("simulation exceeded event budget");

    // Process every state transition due at the current instant.
    for (bool changed = true; changed;) {
      changed = false;
      const double buffered = downloaded - played;

      if (!throttling && downloaded >= burst - tol) {
        throttling = true;
        target = downloaded;
        changed = true;
      }
      if (!download_done && downloaded >= media - tol) {
        download_done = true;
        out.download_complete_time_s = t;
        changed = true;
      }
      switch (phase) {
        case Phase::Waiting:
          if (buffered >= startup - tol || download_done) {
            out.t_init_s = t;
            phase = Phase::Playing;
            changed = true;
          }
          break;
        case Phase::Stalled:
          if (buffered >= resume - tol || download_done) {
            out.stalls.push_back({open_stall_start, t - open_stall_start});
            open_stall_start = -1;
            phase = Phase::Playing;
            changed = true;
          }
          break;
        case Phase::Playing:
          if (played >= media - tol || (download_done && buffered <= tol)) {
            out.reproduction_time_s = t;
            phase = Phase::Finished;
            changed = true;
          } else if (buffered <= tol && !download_done) {
            open_stall_start = t;
            phase = Phase::Stalled;
            changed = true;
          }
          break;
        case Phase::Finished:
          break;
      }
    }
    if (phase == Phase::Finished) break;

    const double bandwidth = segs[seg].rate_Bps;
    const double drain = phase == Phase::Playing ? enc : 0;
    double rate = send_rate(bandwidth, downloaded, throttling, target, video, tol);
    const double buffered = downloaded - played;
    if (std::isfinite(capacity) && buffered >= capacity - tol)
      rate = std::min(rate, drain);  // receiver window closed
    const double slope = rate - drain;

    // Next event: the earliest of every state-changing boundary.
    double dt = kInf;
    if (seg + 1 < segs.size()) dt = std::min(dt, segs[seg + 1].start_s - t);
    if (!throttling && rate > 0) dt = std::min(dt, (burst - downloaded) / rate);
    if (throttling && target < media - tol) dt = std::min(dt, (media - target) / throttle_rate);
    if (throttling && target - downloaded > tol && rate > throttle_rate && target < media - tol)
      dt = std::min(dt, (target - downloaded) / (rate - throttle_rate));
    if (!download_done && rate > 0) dt = std::min(dt, (media - downloaded) / rate);
    if (phase == Phase::Waiting && slope > 0 && startup - buffered > tol)
      dt = std::min(dt, (startup - buffered) / slope);
    if (phase == Phase::Stalled && rate > 0 && resume - buffered > tol)
      dt = std::min(dt, (resume - buffered) / rate);
    if (phase == Phase::Playing && slope < 0 && buffered > tol)
      dt = std::min(dt, buffered / -slope);
    if (phase == Phase::Playing) dt = std::min(dt, (media - played) / drain);
    if (std::isfinite(capacity) && slope > 0 && capacity - buffered > tol)
      dt = std::min(dt, (capacity - buffered) / slope);

    if (!std::isfinite(dt))
      throw UnfinishableSession("bandwidth trace can never deliver the full clip");
    dt = std::max(dt, 0.0);

    downloaded += rate * dt;
    played += drain * dt;
    if (throttling) target = std::min(media, target + throttle_rate * dt);
    t += dt;
    while (seg + 1 < segs.size() && t >= segs[seg + 1].start_s - 1e-9 * std::max(1.0, t)) ++seg;

    out.buffer_trajectory.push_back({t, downloaded, played, downloaded - played});
  }

  if (open_stall_start >= 0) out.stalls.push_back({open_stall_start, t - open_stall_start});
  return out;
}

AppQoSMetrics extract_metrics(const PlaybackTimeline& timeline) {
  AppQoSMetrics m;
  m.t_init_s = timeline.t_init_s;
  m.n_pauses = static_cast<int>(timeline.stalls.size());
  if (m.n_pauses > 0) {
    double total = 0;
    for (const auto& s : timeline.stalls) total += s.duration_s;
    m.t_rebuf_s = total / m.n_pauses;
    m.f_rebuf_per_s =
        timeline.reproduction_time_s > 0 ? m.n_pauses / timeline.reproduction_time_s : 0;
  }
  return m;
}

AppQoSMetrics estimate_metrics_from_averages(double avg_throughput_Bps, const VideoProfile& video,
                                             const PlayerConfig& player) {
  if (!(avg_throughput_Bps > 0)) throw ParamError("avg_throughput must be > 0");
  return extract_metrics(simulate_session(BandwidthTrace::constant(avg_throughput_Bps), video, player));
}

}  // namespace qoe::sim
