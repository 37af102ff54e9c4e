#include "qoe/mos_model.hpp"

#include <algorithm>

namespace qoe::mos {

namespace {

void check_bounds(const std::array<double, 2>& b, const char* name) {
  if (b[0] < 0 || !(b[0] < b[1]))
    throw ParamError(std::string(name) + " bounds must satisfy 0 <= lower < upper");
}

int band_of(double value, const std::array<double, 2>& bounds) {
  if (value < bounds[0]) return 1;
  if (value < bounds[1]) return 2;
  return 3;
}

double clamp_mos(double v) { return std::clamp(v, 1.0, 5.0); }

}  // namespace

void validate(const QuantizationConfig& cfg) {
  check_bounds(cfg.t_init_bounds_s, "t_init");
  check_bounds(cfg.f_rebuf_bounds_per_s, "f_rebuf");
  check_bounds(cfg.t_rebuf_bounds_s, "t_rebuf");
}

void validate(const MosCoefficients& coeffs) {
  if (!(coeffs.intercept > 0)) throw ParamError("intercept must be > 0");
  if (coeffs.c_ti < 0 || coeffs.c_fr < 0 || coeffs.c_tr < 0)
    throw ParamError("coefficients must be >= 0");
}

void validate(const CalibrationSlope& cal) {
  if (!(cal.slope > 0)) throw ParamError("calibration slope must be > 0");
}

QuantizedLevels quantize(const sim::AppQoSMetrics& metrics, const QuantizationConfig& cfg) {
  validate(cfg);
  if (metrics.t_init_s < 0 || metrics.f_rebuf_per_s < 0 || metrics.t_rebuf_s < 0)
    throw ParamError("metrics must be >= 0");
  return {band_of(metrics.t_init_s, cfg.t_init_bounds_s),
          band_of(metrics.f_rebuf_per_s, cfg.f_rebuf_bounds_per_s),
          band_of(metrics.t_rebuf_s, cfg.t_rebuf_bounds_s)};
}

MosScore mos_base(const QuantizedLevels& levels, const MosCoefficients& coeffs) {
  validate(coeffs);
  for (int l : {levels.l_ti, levels.l_fr, levels.l_tr})
    if (l < 1 || l > 3) throw ParamError("quantized levels must be in {1,2,3}");
  const double raw = coeffs.intercept - coeffs.c_ti * levels.l_ti - coeffs.c_fr * levels.l_fr -
                     coeffs.c_tr * levels.l_tr;
  return {clamp_mos(raw), MosVariant::Base};
}

MosScore mos_calibrated(const MosScore& base, const CalibrationSlope& cal) {
  validate(cal);
  if (base.variant != MosVariant::Base)
    throw ParamError("calibration applies to a base score only");
  return {clamp_mos(cal.slope * base.value), MosVariant::Calibrated};
}

PipelineResult estimate_mos_from_network(const tcp::NetworkQoS& qos, const tcp::TcpParams& tcp,
                                         const sim::VideoProfile& video,
                                         const sim::PlayerConfig& player,
                                         const QuantizationConfig& cfg,
                                         const MosCoefficients& coeffs,
                                         const std::optional<CalibrationSlope>& cal) {
  return estimate_mos_from_throughput(tcp::steady_state_throughput(qos, tcp), video, player, cfg,
                                      coeffs, cal);
}

PipelineResult estimate_mos_from_throughput(double avg_throughput_Bps,
                                            const sim::VideoProfile& video,
                                            const sim::PlayerConfig& player,
                                            const QuantizationConfig& cfg,
                                            const MosCoefficients& coeffs,
                                            const std::optional<CalibrationSlope>& cal) {
  PipelineResult r;
  r.throughput_Bps = avg_throughput_Bps;
  r.metrics = sim::estimate_metrics_from_averages(avg_throughput_Bps, video, player);
  r.levels = quantize(r.metrics, cfg);
  r.base = mos_base(r.levels, coeffs);
  if (cal) r.calibrated = mos_calibrated(r.base, *cal);
  return r;
}

}  // namespace qoe::mos
