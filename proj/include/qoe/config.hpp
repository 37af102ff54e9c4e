#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qoe/advice_engine.hpp"
#include "qoe/mos_model.hpp"
#include "qoe/playback_sim.hpp"
#include "qoe/tcp_model.hpp"

namespace qoe::config {

struct TcpDefaults {
  double mss_bytes = 1460;
  double max_window_bytes = 65535;
  double acked_per_ack = 2;
  std::optional<double> rto_s;  // absent: max(1 s, 4 * rtt)
};

struct PlayerDefaults {
  double startup_media_seconds = 5.0;            // threshold as seconds of media
  std::optional<double> resume_media_seconds;    // absent: same as startup
  std::optional<double> startup_bytes;           // absolute override
  std::optional<double> resume_bytes;
  double buffer_capacity_bytes = std::numeric_limits<double>::infinity();
};

struct CalibrationSet {
  double all = 1.1935;
  double wifi = 1.1995;
  double umts = 1.2089;
};

/// Everything tunable in one place. All values have embedded defaults; a
/// config file only needs the keys it overrides.
struct PipelineConfig {
  TcpDefaults tcp;
  PlayerDefaults player;
  mos::QuantizationConfig quantization;
  mos::MosCoefficients mos;
  CalibrationSet calibration;
  advice::AdviceThresholds advice;
  std::string store_path = "qoe_reports.jsonl";
  std::string listen_address = "127.0.0.1:8080";
};

void validate(const PipelineConfig& cfg);

nlohmann::ordered_json to_json(const PipelineConfig& cfg);
PipelineConfig from_json(const nlohmann::json& j);

/// Loads and validates a JSON config file. Unknown keys are rejected.
PipelineConfig load_file(const std::string& path);

/// Resolved TCP parameters for a given RTT.
tcp::TcpParams tcp_params_for(const TcpDefaults& tcp, double rtt_s);

/// Resolved player thresholds for a given video.
sim::PlayerConfig player_config_for(const PlayerDefaults& player, const sim::VideoProfile& video);

double slope_for(const CalibrationSet& cal, mos::TechnologyScope scope);

}  // namespace qoe::config
