#include <doctest.h>

#include <algorithm>
#include <random>

#include "qoe/advice_engine.hpp"

using namespace qoe;
using namespace qoe::advice;

namespace {

// A device in good shape streaming a video it can afford.
DeviceState healthy() {
  DeviceState d;
  d.connection_kind = ConnectionKind::Wifi;
  d.rssi_dbm = -50;
  d.battery_level = 90;
  d.device_capability_index = 10;
  return d;
}

SessionContext affordable() {
  SessionContext s;
  s.measured_throughput_Bps = 200000;
  s.video_coding_rate_Bps = 62500;
  s.video_requirement_index = 3;
  return s;
}

SessionContext starved() {
  SessionContext s = affordable();
  s.measured_throughput_Bps = 30000;  // below the coding rate
  return s;
}

bool has(const std::vector<Diagnosis>& ds, Cause cause, std::string_view advice) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnosis& d) {
    return d.cause == cause && d.advice == advice;
  });
}

}  // namespace

TEST_CASE("a healthy device yields no diagnoses") {
  CHECK(diagnose(healthy(), affordable(), {}).empty());
}

TEST_CASE("lock on 2G advises activating 3G") {
  DeviceState d = healthy();
  d.connection_kind = ConnectionKind::Cellular;
  d.network_traffic_level = TrafficLevel::Low;
  d.locked_on_2g = true;
  const auto ds = diagnose(d, starved(), {});
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].cause == Cause::LowThroughput);
  CHECK(ds[0].advice == "Activate 3G");
}

TEST_CASE("tethering on WiFi advises switching it off") {
  DeviceState d = healthy();
  d.network_traffic_level = TrafficLevel::Low;
  d.wifi_tethering = true;
  d.bluetooth_enabled = true;  // later row must not fire
  const auto ds = diagnose(d, starved(), {});
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].advice == "Switch off WiFi Tethering");
}

TEST_CASE("low memory prefers the many-apps branch over the hungry app") {
  DeviceState d = healthy();
  d.low_memory = true;
  d.hungry_app_detected = true;
  d.running_apps = 12;
  const auto ds = diagnose(d, affordable(), {});
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].cause == Cause::LowMemory);
  CHECK(ds[0].advice == "Offer some apps/services to be switched off");
}

TEST_CASE("independent causes fire together in table order") {
  DeviceState d = healthy();
  d.network_traffic_level = TrafficLevel::High;
  d.syncing_apps = 12;
  d.low_memory = true;
  d.hungry_app_detected = true;
  d.cpu_freq_low = true;
  d.battery_level = 5;
  SessionContext s = starved();
  s.video_resolution_low = true;

  const auto ds = diagnose(d, s, {});
  REQUIRE(ds.size() == 4);
  CHECK(ds[0].cause == Cause::LowThroughput);
  CHECK(ds[0].advice == "Temporarily stop data synchronization");
  CHECK(ds[1].cause == Cause::LowMemory);
  CHECK(ds[1].advice == "Offer to switch off “hungry” app");
  CHECK(ds[2].cause == Cause::LowCpuFreqForced);
  CHECK(ds[2].advice == "Wait until battery gets in better conditions");
  CHECK(ds[3].cause == Cause::LowSourceQuality);
  CHECK(ds[3].advice == "Select another file of higher quality");
}

TEST_CASE("every rule row is reachable") {
  const AdviceThresholds t;

  const auto expect_one = [&](const DeviceState& d, const SessionContext& s, Cause cause,
                              std::string_view advice) {
    const auto ds = diagnose(d, s, t);
    INFO("expected: ", advice);
    CHECK(has(ds, cause, advice));
  };

  // Low throughput / high traffic load
  {
    DeviceState d = healthy();
    d.network_traffic_level = TrafficLevel::High;
    d.syncing_apps = 10;
    expect_one(d, starved(), Cause::LowThroughput, "Temporarily stop data synchronization");
    d.syncing_apps = 0;
    d.running_apps = 10;
    expect_one(d, starved(), Cause::LowThroughput, "Offer some apps/services to be switched off");
    d.running_apps = 0;
    expect_one(d, starved(), Cause::LowThroughput, "Switch to other technology (WiFi, Mobile)");
  }
  // Low throughput / low traffic on cellular
  {
    DeviceState d = healthy();
    d.connection_kind = ConnectionKind::Cellular;
    d.network_traffic_level = TrafficLevel::Low;
    d.locked_on_2g = true;
    expect_one(d, starved(), Cause::LowThroughput, "Activate 3G");
    d.locked_on_2g = false;
    d.rssi_dbm = -100;
    d.wifi_available = true;
    expect_one(d, starved(), Cause::LowThroughput, "Switch to a WiFi connection");
    d.wifi_available = false;
    d.wifi_enabled = true;
    expect_one(d, starved(), Cause::LowThroughput, "Switch off WiFi to avoid interference");
    d.wifi_enabled = false;
    d.bluetooth_enabled = true;
    expect_one(d, starved(), Cause::LowThroughput, "Switch off Bluetooth to avoid interference");
    // No ELSE branch here: good RSSI and no 2G lock diagnose nothing.
    d.bluetooth_enabled = false;
    d.rssi_dbm = -60;
    CHECK(diagnose(d, starved(), t).empty());
  }
  // Low throughput / low traffic on WiFi
  {
    DeviceState d = healthy();
    d.network_traffic_level = TrafficLevel::Low;
    d.wifi_tethering = true;
    expect_one(d, starved(), Cause::LowThroughput, "Switch off WiFi Tethering");
    d.wifi_tethering = false;
    d.bluetooth_enabled = true;
    expect_one(d, starved(), Cause::LowThroughput, "Switch off Bluetooth");
    d.bluetooth_enabled = false;
    expect_one(d, starved(), Cause::LowThroughput, "Switch to a cellular network connection");
  }
  // Low memory
  {
    DeviceState d = healthy();
    d.low_memory = true;
    d.running_apps = 10;
    expect_one(d, affordable(), Cause::LowMemory, "Offer some apps/services to be switched off");
    d.running_apps = 0;
    d.hungry_app_detected = true;
    expect_one(d, affordable(), Cause::LowMemory, "Offer to switch off “hungry” app");
    d.hungry_app_detected = false;
    expect_one(d, affordable(), Cause::LowMemory, "Check for system updates");
  }
  // High CPU load
  {
    DeviceState d = healthy();
    d.cpu_load_high = true;
    d.running_apps = 10;
    expect_one(d, affordable(), Cause::HighCpuLoad, "Offer some apps/services to be switched off");
    d.running_apps = 0;
    CHECK(diagnose(d, affordable(), t).empty());  // chain has no ELSE
  }
  // Low CPU frequency forced
  {
    DeviceState d = healthy();
    d.cpu_freq_low = true;
    d.battery_level = 10;
    expect_one(d, affordable(), Cause::LowCpuFreqForced,
               "Wait until battery gets in better conditions");
    d.battery_level = 90;
    d.battery_temp_high = true;
    expect_one(d, affordable(), Cause::LowCpuFreqForced,
               "Wait until battery gets in better conditions");
    d.battery_temp_high = false;
    d.power_profile = PowerProfile::PowerSave;
    expect_one(d, affordable(), Cause::LowCpuFreqForced, "Select a performance oriented profile");
    d.power_profile = PowerProfile::Balanced;
    expect_one(d, affordable(), Cause::LowCpuFreqForced, "Check for system updates");
  }
  // Video requirements vs terminal capability
  {
    DeviceState d = healthy();
    d.device_capability_index = 2;
    SessionContext s = affordable();
    s.video_requirement_index = 5;
    expect_one(d, s, Cause::VideoExceedsCapability,
               "Try to select less demanding video files, switch off High Quality (HQ) option.");
  }
  // Low source quality
  {
    SessionContext s = affordable();
    s.video_resolution_low = true;
    expect_one(healthy(), s, Cause::LowSourceQuality, "Select another file of higher quality");
  }
}

TEST_CASE("every emitted advice belongs to the catalog") {
  const auto& catalog = advice_catalog();
  CHECK(catalog.size() == 16);

  std::mt19937 rng(17);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> apps(0, 20);
  std::uniform_int_distribution<int> rssi(-120, 0);
  std::uniform_real_distribution<double> battery(0, 100);
  std::uniform_real_distribution<double> thr(0, 200000);

  for (int i = 0; i < 500; ++i) {
    DeviceState d;
    d.connection_kind = static_cast<ConnectionKind>(kind(rng));
    d.locked_on_2g = coin(rng);
    d.rssi_dbm = rssi(rng);
    d.wifi_available = coin(rng);
    d.wifi_enabled = coin(rng);
    d.bluetooth_enabled = coin(rng);
    d.wifi_tethering = coin(rng);
    d.syncing_apps = apps(rng);
    d.running_apps = apps(rng);
    d.hungry_app_detected = coin(rng);
    d.low_memory = coin(rng);
    d.cpu_load_high = coin(rng);
    d.cpu_freq_low = coin(rng);
    d.battery_level = battery(rng);
    d.battery_temp_high = coin(rng);
    d.power_profile = static_cast<PowerProfile>(kind(rng));
    d.device_capability_index = apps(rng);
    d.network_traffic_level = coin(rng) ? TrafficLevel::High : TrafficLevel::Low;
    SessionContext s;
    s.measured_throughput_Bps = thr(rng);
    s.video_coding_rate_Bps = 62500;
    s.video_requirement_index = apps(rng);
    s.video_resolution_low = coin(rng);

    const auto ds = diagnose(d, s, {});
    // Determinism and catalog closure; at most one advice per cause.
    const auto again = diagnose(d, s, {});
    REQUIRE(ds.size() == again.size());
    int per_cause[6] = {0, 0, 0, 0, 0, 0};
    for (std::size_t k = 0; k < ds.size(); ++k) {
      CHECK(ds[k] == again[k]);
      CHECK(std::find(catalog.begin(), catalog.end(), ds[k].advice) != catalog.end());
      ++per_cause[static_cast<int>(ds[k].cause)];
    }
    for (int count : per_cause) CHECK(count <= 1);
  }
}

TEST_CASE("throughput gate respects the margin") {
  AdviceThresholds t;
  t.throughput_margin = 1.5;
  DeviceState d = healthy();
  d.network_traffic_level = TrafficLevel::Low;
  d.wifi_tethering = true;
  SessionContext s = affordable();
  s.measured_throughput_Bps = 80000;  // above coding rate, below 1.5x
  CHECK(has(diagnose(d, s, t), Cause::LowThroughput, "Switch off WiFi Tethering"));
  s.measured_throughput_Bps = 100000;  // above the margin
  CHECK(diagnose(d, s, t).empty());
}

TEST_CASE("state validation") {
  DeviceState d = healthy();
  d.battery_level = 130;
  CHECK_THROWS_AS(diagnose(d, affordable(), {}), ParamError);
  d = healthy();
  d.rssi_dbm = 10;
  CHECK_THROWS_AS(diagnose(d, affordable(), {}), ParamError);
}
