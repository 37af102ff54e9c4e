#pragma once

#include <algorithm>
#include <random>

#include "qoe/playback_sim.hpp"

namespace testgen {

struct Scenario {
  qoe::sim::BandwidthTrace trace;
  qoe::sim::VideoProfile video;
  qoe::sim::PlayerConfig player;
};

// Random but always-finishable sessions: every trace rate stays above a
// fraction of the encoding rate, so download time is bounded.
inline Scenario random_scenario(std::mt19937& rng, bool never_below_throttle_rate = false) {
  std::uniform_real_distribution<double> media_d(1e6, 4e7);
  std::uniform_real_distribution<double> dur_d(30, 300);
  std::uniform_real_distribution<double> tf_d(1.0, 2.0);
  std::uniform_real_distribution<double> unit(0, 1);

  const double media = media_d(rng);
  const double duration = dur_d(rng);
  const double tf = tf_d(rng);
  const double enc = media / duration;
  const double burst = unit(rng) * std::min(media, 60.0 * enc);
  const auto video = qoe::sim::make_video_profile(media, duration, tf, burst);

  qoe::sim::PlayerConfig player;
  player.startup_threshold_bytes = (0.5 + 9.5 * unit(rng)) * enc;
  player.resume_threshold_bytes = (0.5 + 9.5 * unit(rng)) * enc;
  if (unit(rng) < 0.5) {
    player.buffer_capacity_bytes =
        std::max(player.startup_threshold_bytes, player.resume_threshold_bytes) +
        (5.0 + 25.0 * unit(rng)) * enc;
  }

  std::uniform_int_distribution<int> nseg_d(1, 5);
  const int nseg = nseg_d(rng);
  std::vector<qoe::sim::BandwidthTrace::Segment> segs;
  double t = 0;
  for (int i = 0; i < nseg; ++i) {
    double factor;
    if (never_below_throttle_rate) {
      factor = tf + unit(rng);  // always at or above the throttle rate
    } else {
      factor = 0.25 + 2.75 * unit(rng);
    }
    segs.push_back({t, factor * enc});
    // Millisecond-aligned boundaries keep the discrete oracle's grid honest.
    t += std::floor((5.0 + 115.0 * unit(rng)) * 1000.0) / 1000.0;
  }
  return {qoe::sim::BandwidthTrace(std::move(segs)), video, player};
}

}  // namespace testgen
