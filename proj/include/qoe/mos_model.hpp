#pragma once

#include <array>
#include <optional>

#include "qoe/errors.hpp"
#include "qoe/playback_sim.hpp"
#include "qoe/tcp_model.hpp"

namespace qoe::mos {

/// Low/medium/high band edges for each application metric. A value equal to a
/// bound falls in the upper band (half-open intervals).
struct QuantizationConfig {
  std::array<double, 2> t_init_bounds_s{5.0, 15.0};
  std::array<double, 2> f_rebuf_bounds_per_s{0.002, 0.01};
  std::array<double, 2> t_rebuf_bounds_s{5.0, 10.0};
};

void validate(const QuantizationConfig& cfg);

struct QuantizedLevels {
  int l_ti = 1;
  int l_fr = 1;
  int l_tr = 1;
};

/// Utility-function coefficients. Defaults are the published wired-scenario fit.
struct MosCoefficients {
  double intercept = 4.23;
  double c_ti = 0.0672;
  double c_fr = 0.742;
  double c_tr = 0.106;
};

void validate(const MosCoefficients& coeffs);

enum class TechnologyScope { All, Wifi, Umts };

/// Multiplicative correction fitted against wireless user feedback.
struct CalibrationSlope {
  double slope = 1.1935;
  TechnologyScope scope = TechnologyScope::All;
};

void validate(const CalibrationSlope& cal);

enum class MosVariant { Base, Calibrated };

struct MosScore {
  double value = 0;  // clamped to [1, 5]
  MosVariant variant = MosVariant::Base;
};

QuantizedLevels quantize(const sim::AppQoSMetrics& metrics, const QuantizationConfig& cfg);

MosScore mos_base(const QuantizedLevels& levels, const MosCoefficients& coeffs);

/// Applies the calibration slope to a base score. Calibrating an already
/// calibrated score is rejected.
MosScore mos_calibrated(const MosScore& base, const CalibrationSlope& cal);

/// Full pipeline output: throughput -> metrics -> levels -> MOS.
struct PipelineResult {
  double throughput_Bps = 0;
  sim::AppQoSMetrics metrics;
  QuantizedLevels levels;
  MosScore base;
  std::optional<MosScore> calibrated;
};

/// The three-step network QoS -> application QoS -> MOS estimation chain.
PipelineResult estimate_mos_from_network(const tcp::NetworkQoS& qos, const tcp::TcpParams& tcp,
                                         const sim::VideoProfile& video,
                                         const sim::PlayerConfig& player,
                                         const QuantizationConfig& cfg,
                                         const MosCoefficients& coeffs,
                                         const std::optional<CalibrationSlope>& cal);

/// Same chain with the TCP model bypassed by a directly measured throughput.
PipelineResult estimate_mos_from_throughput(double avg_throughput_Bps,
                                            const sim::VideoProfile& video,
                                            const sim::PlayerConfig& player,
                                            const QuantizationConfig& cfg,
                                            const MosCoefficients& coeffs,
                                            const std::optional<CalibrationSlope>& cal);

}  // namespace qoe::mos
