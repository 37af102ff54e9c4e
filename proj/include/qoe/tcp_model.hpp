#pragma once

#include "qoe/errors.hpp"

namespace qoe::tcp {

/// Network-level QoS, assumed constant over the whole download.
struct NetworkQoS {
  double link_bandwidth_Bps = 0;  // > 0
  double rtt_s = 0;               // > 0
  double loss_rate = 0;           // in [0, 1)
};

/// Parameters of the steady-state TCP throughput model.
struct TcpParams {
  double mss_bytes = 1460;       // segment size
  double max_window_bytes = 65535;
  double acked_per_ack = 2;      // the model's b
  double rto_s = 1.0;            // the model's T0
};

void validate(const NetworkQoS& qos);
void validate(const TcpParams& tcp);

/// Conventional defaults with T0 = max(1 s, 4 * rtt).
TcpParams default_tcp_params(double rtt_s);

/// Average download throughput (bytes/s) under steady-state loss, capped by
/// the receiver window and the physical link rate. The loss-free limit is
/// min(link_bandwidth, max_window / rtt).
double steady_state_throughput(const NetworkQoS& qos, const TcpParams& tcp);

}  // namespace qoe::tcp
