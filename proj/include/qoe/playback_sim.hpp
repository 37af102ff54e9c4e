#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qoe/errors.hpp"

namespace qoe::sim {

/// One clip as delivered by the progressive-download server.
struct VideoProfile {
  double media_size_bytes = 0;
  double duration_s = 0;
  double encoding_rate_Bps = 0;    // media_size / duration
  double throttle_factor = 1.25;   // >= 1
  double initial_burst_bytes = 0;  // <= media_size
};

/// Builds a profile with encoding_rate derived from size and duration.
VideoProfile make_video_profile(double media_size_bytes, double duration_s,
                                double throttle_factor, double initial_burst_bytes);

void validate(const VideoProfile& video);

/// Client play-out buffer policy. Thresholds are bytes of buffered media.
struct PlayerConfig {
  double startup_threshold_bytes = 0;
  double resume_threshold_bytes = 0;
  double buffer_capacity_bytes = std::numeric_limits<double>::infinity();
};

void validate(const PlayerConfig& player);

/// Piecewise-constant available bandwidth. Segment i spans
/// [start of i, start of i+1); the last segment extends forever.
class BandwidthTrace {
 public:
  struct Segment {
    double start_s = 0;
    double rate_Bps = 0;
  };

  explicit BandwidthTrace(std::vector<Segment> segments);
  static BandwidthTrace constant(double rate_Bps);

  /// CSV with header "time_s,rate_Bps", strictly increasing times, first at 0.
  static BandwidthTrace from_csv(std::istream& in);
  static BandwidthTrace from_csv_file(const std::string& path);

  double rate_at(double t_s) const;
  std::size_t segment_index_at(double t_s) const;
  /// End of segment i (+inf for the last).
  double segment_end(std::size_t i) const;
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  std::vector<Segment> segments_;
};

/// Cumulative server-side delivery state used by server_send_rate. The phase
/// follows from bytes_sent: below initial_burst the server is bursting.
struct ServerState {
  double bytes_sent = 0;       // delivered so far
  double throttle_target = 0;  // cumulative bytes the throttle schedule wanted out
};

/// Instantaneous send rate of the delivery server: full bandwidth during the
/// initial burst and while a congestion backlog is being drained, otherwise
/// capped at throttle_factor * encoding_rate. Zero once the clip is sent.
double server_send_rate(double t_s, const ServerState& state, const BandwidthTrace& trace,
                        const VideoProfile& video);

struct StallEvent {
  double start_s = 0;
  double duration_s = 0;
};

struct BufferSample {
  double t_s = 0;
  double downloaded_bytes = 0;
  double played_bytes = 0;
  double buffered_bytes = 0;
};

/// Result of one simulated session.
struct PlaybackTimeline {
  double t_init_s = 0;
  std::vector<StallEvent> stalls;
  double reproduction_time_s = 0;      // request to end of playback, stalls included
  double download_complete_time_s = 0;
  std::vector<BufferSample> buffer_trajectory;
};

/// Application performance metrics of one session.
struct AppQoSMetrics {
  double t_init_s = 0;
  double f_rebuf_per_s = 0;  // stall events per second of reproduction time
  double t_rebuf_s = 0;      // mean stall duration
  int n_pauses = 0;
};

/// Exact event-driven fluid simulation of one progressive-download session.
/// Throws UnfinishableSession when the trace can never deliver the clip.
PlaybackTimeline simulate_session(const BandwidthTrace& trace, const VideoProfile& video,
                                  const PlayerConfig& player);

AppQoSMetrics extract_metrics(const PlaybackTimeline& timeline);

/// Transparent-mode estimate: run the simulation against a constant trace at
/// the average throughput. Tends to be slightly optimistic, since a real
/// buffer reacts to instantaneous rather than average rates.
AppQoSMetrics estimate_metrics_from_averages(double avg_throughput_Bps, const VideoProfile& video,
                                             const PlayerConfig& player);

}  // namespace qoe::sim
