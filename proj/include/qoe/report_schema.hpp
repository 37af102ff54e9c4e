#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qoe/errors.hpp"

namespace qoe::report {

enum class LocationProvider { Gps, Network };

struct Location {
  double latitude = 0;    // degrees, (-90, 90)
  double longitude = 0;   // degrees, (-180, 180)
  double altitude_m = 0;  // meters above sea level
  double accuracy_m = 0;  // >= 0
  std::string time;       // YYYY-MM-DD_HH:MM:SS
  LocationProvider provider = LocationProvider::Gps;

  bool operator==(const Location&) const = default;
};

/// One session record as reported from a terminal to the QoE server.
struct SessionReport {
  std::string imei;                 // exactly 15 decimal digits
  int reproduction_mode = 1;        // 1 embedded player, 2 native app, 3 web browser
  std::int64_t reproduction_time_ms = 0;
  std::string date;                 // YYYY-MM-DD
  std::string hour;                 // HH:MM:SS
  std::int64_t initial_buffering_time_ms = 0;
  double rebuffering_frequency = 0;  // events/second
  std::int64_t mean_rebuffering_time_ms = 0;
  Location location;
  int connection_type = 0;  // 0..15, see connection_type_label()
  std::int64_t lac = 0;
  std::int64_t cell_id = 0;
  int rssi_dbm = 0;
  std::optional<int> video_quality_feedback;  // 1..5 when present
  std::optional<int> audio_quality_feedback;
  std::optional<int> general_feedback;
  std::string additional_comments;
  double estimated_video_quality = 1;  // 1..5

  bool operator==(const SessionReport&) const = default;
};

struct Violation {
  std::string field;
  std::string message;
};

/// Checks every schema invariant; empty result means the report is valid.
std::vector<Violation> validate(const SessionReport& report);

/// One-line JSON record with the wire parameter names. Throws ParamError when
/// the report fails validate().
std::string serialize(const SessionReport& report);

/// Strict inverse of serialize(): unknown fields, missing required fields and
/// type mismatches are ParseErrors. Range violations are left to validate().
SessionReport parse(std::string_view text);

enum class TechnologyGroup { Wifi, UmtsFamily, Other };

/// Label for a connection type code 0..15 (e.g. 0 -> WIFI, 13 -> LTE).
std::string_view connection_type_label(int code);
/// Inverse of connection_type_label.
std::optional<int> connection_type_code(std::string_view label);

TechnologyGroup technology_group_of_code(int code);
TechnologyGroup technology_of(const SessionReport& report);

std::string_view to_string(TechnologyGroup group);

}  // namespace qoe::report
