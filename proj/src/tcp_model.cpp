#include "qoe/tcp_model.hpp"

#include <algorithm>
#include <cmath>

namespace qoe::tcp {

void validate(const NetworkQoS& qos) {
  if (!(qos.link_bandwidth_Bps > 0)) throw ParamError("link_bandwidth must be > 0");
  if (!(qos.rtt_s > 0)) throw ParamError("rtt must be > 0");
  if (!(qos.loss_rate >= 0 && qos.loss_rate < 1)) throw ParamError("loss_rate must be in [0, 1)");
}

void validate(const TcpParams& tcp) {
  if (!(tcp.mss_bytes > 0)) throw ParamError("mss must be > 0");
  if (!(tcp.max_window_bytes > 0)) throw ParamError("max_window must be > 0");
  if (tcp.max_window_bytes < tcp.mss_bytes) throw ParamError("max_window must be >= mss");
  if (!(tcp.acked_per_ack > 0)) throw ParamError("acked_per_ack must be > 0");
  if (!(tcp.rto_s > 0)) throw ParamError("rto must be > 0");
}

TcpParams default_tcp_params(double rtt_s) {
  TcpParams p;
  p.rto_s = std::max(1.0, 4.0 * rtt_s);
  return p;
}

double steady_state_throughput(const NetworkQoS& qos, const TcpParams& tcp) {
  validate(qos);
  validate(tcp);

  const double window_limit = tcp.max_window_bytes / qos.rtt_s;
  const double cap = std::min(qos.link_bandwidth_Bps, window_limit);

  const double p = qos.loss_rate;
  if (p == 0.0) return cap;

  const double b = tcp.acked_per_ack;
  const double rtt_term = qos.rtt_s * std::sqrt(2.0 * b * p / 3.0);
  const double timeout_term =
      tcp.rto_s * std::min(1.0, 3.0 * std::sqrt(3.0 * b * p / 8.0)) * p * (1.0 + 32.0 * p * p);
  const double rate_pkts = 1.0 / (rtt_term + timeout_term);

  return std::min(cap, rate_pkts * tcp.mss_bytes);
}

}  // namespace qoe::tcp
