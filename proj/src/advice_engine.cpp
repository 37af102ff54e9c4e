#include "qoe/advice_engine.hpp"

#include <array>

namespace qoe::advice {

namespace adv {
// Advice catalog, verbatim.
constexpr std::string_view kStopSync = "Temporarily stop data synchronization";
constexpr std::string_view kOfferSwitchOffApps = "Offer some apps/services to be switched off";
constexpr std::string_view kSwitchTechnology = "Switch to other technology (WiFi, Mobile)";
constexpr std::string_view kActivate3g = "Activate 3G";
constexpr std::string_view kSwitchToWifi = "Switch to a WiFi connection";
constexpr std::string_view kWifiOffInterference = "Switch off WiFi to avoid interference";
constexpr std::string_view kBtOffInterference = "Switch off Bluetooth to avoid interference";
constexpr std::string_view kTetheringOff = "Switch off WiFi Tethering";
constexpr std::string_view kBtOff = "Switch off Bluetooth";
constexpr std::string_view kSwitchToCellular = "Switch to a cellular network connection";
constexpr std::string_view kSwitchOffHungryApp = "Offer to switch off “hungry” app";
constexpr std::string_view kCheckUpdates = "Check for system updates";
constexpr std::string_view kWaitBattery = "Wait until battery gets in better conditions";
constexpr std::string_view kPerformanceProfile = "Select a performance oriented profile";
constexpr std::string_view kLessDemandingVideo =
    "Try to select less demanding video files, switch off High Quality (HQ) option.";
constexpr std::string_view kHigherQualityFile = "Select another file of higher quality";
}  // namespace adv

namespace {

using Pred = bool (*)(const DeviceState&, const SessionContext&, const AdviceThresholds&);

struct Row {
  Pred condition;  // nullptr = unconditional ELSE
  std::string_view advice;
};

struct Chain {
  Cause cause;
  Pred gate;  // evidence that selects this chain
  std::array<Row, 4> rows;
  int row_count;
};

bool low_throughput(const DeviceState&, const SessionContext& s, const AdviceThresholds& t) {
  return s.measured_throughput_Bps < t.throughput_margin * s.video_coding_rate_Bps;
}

bool many(int count, const AdviceThresholds& t) { return count >= t.many_apps; }

bool rssi_low_cell(const DeviceState& d, const AdviceThresholds& t) {
  return d.rssi_dbm < t.rssi_low_cellular_dbm;
}

// Table order matters: chains are evaluated and reported top to bottom.
const std::array<Chain, 8> kRuleTable = {{
    // Low throughput / high traffic load
    {Cause::LowThroughput,
     [](const DeviceState& d, const SessionContext& s, const AdviceThresholds& t) {
       return low_throughput(d, s, t) && d.network_traffic_level == TrafficLevel::High;
     },
     {{{[](const DeviceState& d, const SessionContext&, const AdviceThresholds& t) {
          return many(d.syncing_apps, t);
        },
        adv::kStopSync},
       {[](const DeviceState& d, const SessionContext&, const AdviceThresholds& t) {
          return many(d.running_apps, t);
        },
        adv::kOfferSwitchOffApps},
       {nullptr, adv::kSwitchTechnology},
       {}}},
     3},
    // Low throughput / low traffic, cellular connection
    {Cause::LowThroughput,
     [](const DeviceState& d, const SessionContext& s, const AdviceThresholds& t) {
       return low_throughput(d, s, t) && d.network_traffic_level == TrafficLevel::Low &&
              d.connection_kind == ConnectionKind::Cellular;
     },
     {{{[](const DeviceState& d, const SessionContext&, const AdviceThresholds&) {
          return d.locked_on_2g;
        },
        adv::kActivate3g},
       {[](const DeviceState& d, const SessionContext&, const AdviceThresholds& t) {
          return rssi_low_cell(d, t) && d.wifi_available;
        },
        adv::kSwitchToWifi},
       {[](const DeviceState& d, const SessionContext&, const AdviceThresholds& t) {
          return rssi_low_cell(d, t) && d.wifi_enabled && !d.wifi_available;
        },
        adv::kWifiOffInterference},
       {[](const DeviceState& d, const SessionContext&, const AdviceThresholds& t) {
          return rssi_low_cell(d, t) && d.bluetooth_enabled;
        },
        adv::kBtOffInterference}}},
     4},
    // Low throughput / low traffic, WiFi connection
    {Cause::LowThroughput,
     [](const DeviceState& d, const SessionContext& s, const AdviceThresholds& t) {
       return low_throughput(d, s, t) && d.network_traffic_level == TrafficLevel::Low &&
              d.connection_kind == ConnectionKind::Wifi;
     },
     {{{[](const DeviceState& d, const SessionContext&, const AdviceThresholds&) {
          return d.wifi_tethering;
        },
        adv::kTetheringOff},
       {[](const DeviceState& d, const SessionContext&, const AdviceThresholds&) {
          return d.bluetooth_enabled;
        },
        adv::kBtOff},
       {nullptr, adv::kSwitchToCellular},
       {}}},
     3},
    // Low memory
    {Cause::LowMemory,
     [](const DeviceState& d, const SessionContext&, const AdviceThresholds&) {
       return d.low_memory;
     },
     {{{[](const DeviceState& d, const SessionContext&, const AdviceThresholds& t) {
          return many(d.running_apps, t);
        },
        adv::kOfferSwitchOffApps},
       {[](const DeviceState& d, const SessionContext&, const AdviceThresholds&) {
          return d.hungry_app_detected;
        },
        adv::kSwitchOffHungryApp},
       {nullptr, adv::kCheckUpdates},
       {}}},
     3},
    // High CPU load
    {Cause::HighCpuLoad,
     [](const DeviceState& d, const SessionContext&, const AdviceThresholds&) {
       return d.cpu_load_high;
     },
     {{{[](const DeviceState& d, const SessionContext&, const AdviceThresholds& t) {
          return many(d.running_apps, t);
        },
        adv::kOfferSwitchOffApps},
       {},
       {},
       {}}},
     1},
    // Low CPU frequency forced
    {Cause::LowCpuFreqForced,
     [](const DeviceState& d, const SessionContext&, const AdviceThresholds&) {
       return d.cpu_freq_low;
     },
     {{{[](const DeviceState& d, const SessionContext&, const AdviceThresholds& t) {
          return d.battery_level < t.battery_low_percent || d.battery_temp_high;
        },
        adv::kWaitBattery},
       {[](const DeviceState& d, const SessionContext&, const AdviceThresholds&) {
          return d.power_profile == PowerProfile::PowerSave;
        },
        adv::kPerformanceProfile},
       {nullptr, adv::kCheckUpdates},
       {}}},
     3},
    // Video requirements exceed terminal capabilities
    {Cause::VideoExceedsCapability,
     [](const DeviceState&, const SessionContext&, const AdviceThresholds&) { return true; },
     {{{[](const DeviceState& d, const SessionContext& s, const AdviceThresholds&) {
          return d.device_capability_index < s.video_requirement_index;
        },
        adv::kLessDemandingVideo},
       {},
       {},
       {}}},
     1},
    // Low video quality in origin
    {Cause::LowSourceQuality,
     [](const DeviceState&, const SessionContext&, const AdviceThresholds&) { return true; },
     {{{[](const DeviceState&, const SessionContext& s, const AdviceThresholds&) {
          return s.video_resolution_low;
        },
        adv::kHigherQualityFile},
       {},
       {},
       {}}},
     1},
}};

}  // namespace

void validate(const DeviceState& state) {
  if (state.battery_level < 0 || state.battery_level > 100)
    throw ParamError("battery_level must be in [0, 100]");
  if (state.rssi_dbm > 0) throw ParamError("rssi_dbm must be <= 0");
  if (state.syncing_apps < 0 || state.running_apps < 0)
    throw ParamError("app counts must be >= 0");
}

void validate(const SessionContext& session) {
  if (session.measured_throughput_Bps < 0) throw ParamError("measured_throughput must be >= 0");
  if (session.video_coding_rate_Bps < 0) throw ParamError("video_coding_rate must be >= 0");
}

void validate(const AdviceThresholds& thresholds) {
  if (thresholds.many_apps < 1) throw ParamError("many_apps must be >= 1");
  if (thresholds.battery_low_percent < 0 || thresholds.battery_low_percent > 100)
    throw ParamError("battery_low_percent must be in [0, 100]");
  if (thresholds.throughput_margin <= 0) throw ParamError("throughput_margin must be > 0");
}

std::string_view to_string(Cause cause) {
  switch (cause) {
    case Cause::LowThroughput: return "low_throughput";
    case Cause::LowMemory: return "low_memory";
    case Cause::HighCpuLoad: return "high_cpu_load";
    case Cause::LowCpuFreqForced: return "low_cpu_freq_forced";
    case Cause::VideoExceedsCapability: return "video_exceeds_capability";
    case Cause::LowSourceQuality: return "low_source_quality";
  }
  return "unknown";
}

std::vector<Diagnosis> diagnose(const DeviceState& state, const SessionContext& session,
                                const AdviceThresholds& thresholds) {
  validate(state);
  validate(session);
  validate(thresholds);

  std::vector<Diagnosis> out;
  for (const auto& chain : kRuleTable) {
    if (!chain.gate(state, session, thresholds)) continue;
    for (int i = 0; i < chain.row_count; ++i) {
      const auto& row = chain.rows[static_cast<std::size_t>(i)];
      if (row.condition == nullptr || row.condition(state, session, thresholds)) {
        out.push_back({chain.cause, row.advice});
        break;
      }
    }
  }
  return out;
}

const std::vector<std::string_view>& advice_catalog() {
  static const std::vector<std::string_view> catalog = {
      adv::kStopSync,          adv::kOfferSwitchOffApps, adv::kSwitchTechnology,
      adv::kActivate3g,        adv::kSwitchToWifi,       adv::kWifiOffInterference,
      adv::kBtOffInterference, adv::kTetheringOff,       adv::kBtOff,
      adv::kSwitchToCellular,  adv::kSwitchOffHungryApp, adv::kCheckUpdates,
      adv::kWaitBattery,       adv::kPerformanceProfile, adv::kLessDemandingVideo,
      adv::kHigherQualityFile,
  };
  return catalog;
}

}  // namespace qoe::advice
