#pragma once

#include <string_view>
#include <vector>

#include "qoe/errors.hpp"

namespace qoe::advice {

enum class ConnectionKind { Wifi, Cellular, None };
enum class PowerProfile { Performance, Balanced, PowerSave };
enum class TrafficLevel { High, Low };

/// Snapshot of the device and radio environment at diagnosis time. The engine
/// never reads system state itself; callers fill this in.
struct DeviceState {
  ConnectionKind connection_kind = ConnectionKind::None;
  bool locked_on_2g = false;
  int rssi_dbm = -70;  // <= 0
  bool wifi_available = false;
  bool wifi_enabled = false;
  bool bluetooth_enabled = false;
  bool wifi_tethering = false;
  int syncing_apps = 0;
  int running_apps = 0;
  bool hungry_app_detected = false;
  bool low_memory = false;
  bool cpu_load_high = false;
  bool cpu_freq_low = false;
  double battery_level = 100;  // percent
  bool battery_temp_high = false;
  PowerProfile power_profile = PowerProfile::Balanced;
  int device_capability_index = 0;
  TrafficLevel network_traffic_level = TrafficLevel::Low;
};

struct SessionContext {
  double measured_throughput_Bps = 0;
  int video_requirement_index = 0;
  bool video_resolution_low = false;
  double video_coding_rate_Bps = 0;
};

/// The rule table's fuzzy words ("low RSSI", "many apps", ...) pinned to
/// numbers. All placeholders, config-overridable.
struct AdviceThresholds {
  double rssi_low_cellular_dbm = -95;
  double rssi_low_wifi_dbm = -80;
  int many_apps = 10;
  double battery_low_percent = 15;
  double throughput_margin = 1.0;  // low throughput: measured < margin * coding rate
};

void validate(const DeviceState& state);
void validate(const SessionContext& session);
void validate(const AdviceThresholds& thresholds);

enum class Cause {
  LowThroughput,
  LowMemory,
  HighCpuLoad,
  LowCpuFreqForced,
  VideoExceedsCapability,
  LowSourceQuality,
};

std::string_view to_string(Cause cause);

struct Diagnosis {
  Cause cause;
  std::string_view advice;

  bool operator==(const Diagnosis&) const = default;
};

/// Evaluates the cause/evidence/advice rule table. Causes are independent and
/// reported in table order; within one cause chain only the first matching
/// row fires.
std::vector<Diagnosis> diagnose(const DeviceState& state, const SessionContext& session,
                                const AdviceThresholds& thresholds);

/// Every advice string the engine can emit, in table order.
const std::vector<std::string_view>& advice_catalog();

}  // namespace qoe::advice
