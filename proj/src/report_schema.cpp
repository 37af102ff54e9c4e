#include "qoe/report_schema.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include <json.hpp>

namespace qoe::report {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 16> kConnectionLabels = {
    "WIFI",  "GPRS",   "EDGE",   "UMTS",  "CMDA",    "EVDO_0", "EVDO_A", "1XRTT",
    "HSDPA", "HSUPA",  "HSPA",   "IDEN",  "EVDO_B",  "LTE",    "EHRPD",  "HSPAP"};

bool all_digits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Matches a pattern where 'd' stands for one decimal digit and any other
// character stands for itself.
bool matches_pattern(std::string_view s, std::string_view pattern) {
  if (s.size() != pattern.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (pattern[i] == 'd') {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    } else if (s[i] != pattern[i]) {
      return false;
    }
  }
  return true;
}

int two_digits(std::string_view s, std::size_t pos) {
  return (s[pos] - '0') * 10 + (s[pos + 1] - '0');
}

bool valid_date(std::string_view s) {
  if (!matches_pattern(s, "dddd-dd-dd")) return false;
  const int month = two_digits(s, 5);
  const int day = two_digits(s, 8);
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

bool valid_clock(std::string_view s) {
  if (!matches_pattern(s, "dd:dd:dd")) return false;
  return two_digits(s, 0) <= 23 && two_digits(s, 3) <= 59 && two_digits(s, 6) <= 59;
}

bool valid_location_time(std::string_view s) {
  return s.size() == 19 && s[10] == '_' && valid_date(s.substr(0, 10)) &&
         valid_clock(s.substr(11));
}

}  // namespace

std::vector<Violation> validate(const SessionReport& r) {
  std::vector<Violation> v;
  const auto bad = [&v](std::string field, std::string message) {
    v.push_back({std::move(field), std::move(message)});
  };

  if (r.imei.size() != 15 || !all_digits(r.imei))
    bad("IMEI", "must be exactly 15 decimal digits");
  if (r.reproduction_mode < 1 || r.reproduction_mode > 3)
    bad("ReproductionMode", "must be 1, 2 or 3");
  if (r.reproduction_time_ms < 0) bad("ReproductionTime", "must be >= 0 ms");
  if (!valid_date(r.date)) bad("Date", "must be YYYY-MM-DD");
  if (!valid_clock(r.hour)) bad("Hour", "must be HH:MM:SS");
  if (r.initial_buffering_time_ms < 0) bad("InitialBufferingTime", "must be >= 0 ms");
  if (!(r.rebuffering_frequency >= 0) || !std::isfinite(r.rebuffering_frequency))
    bad("RebufferingFrequency", "must be a finite value >= 0");
  if (r.mean_rebuffering_time_ms < 0) bad("MeanRebufferingTime", "must be >= 0 ms");
  if (!(r.location.latitude > -90 && r.location.latitude < 90))
    bad("Latitude", "must be in (-90, 90) degrees");
  if (!(r.location.longitude > -180 && r.location.longitude < 180))
    bad("Longitude", "must be in (-180, 180) degrees");
  if (!std::isfinite(r.location.altitude_m)) bad("Altitude", "must be finite");
  if (!(r.location.accuracy_m >= 0) || !std::isfinite(r.location.accuracy_m))
    bad("Accuracy", "must be >= 0 meters");
  if (!valid_location_time(r.location.time)) bad("Time", "must be YYYY-MM-DD_HH:MM:SS");
  if (r.connection_type < 0 || r.connection_type > 15)
    bad("ConnectionType", "must be in [0, 15]");
  for (const auto& [name, fb] :
       {std::pair{"VideoQualityFeedback", r.video_quality_feedback},
        std::pair{"AudioQualityFeedback", r.audio_quality_feedback},
        std::pair{"GeneralFeedback", r.general_feedback}}) {
    if (fb && (*fb < 1 || *fb > 5)) bad(name, "must be an integer in [1, 5]");
  }
  if (!(r.estimated_video_quality >= 1 && r.estimated_video_quality <= 5))
    bad("EstimatedVideoQuality", "must be in [1, 5]");
  return v;
}

std::string serialize(const SessionReport& r) {
  const auto violations = validate(r);
  if (!violations.empty()) {
    std::string msg = "cannot serialize invalid report:";
    for (const auto& vi : violations) msg += " " + vi.field + " (" + vi.message + ");";
    throw ParamError(msg);
  }

  ordered_json j;
  j["IMEI"] = r.imei;
  j["ReproductionMode"] = r.reproduction_mode;
  j["ReproductionTime"] = r.reproduction_time_ms;
  j["Date"] = r.date;
  j["Hour"] = r.hour;
  j["InitialBufferingTime"] = r.initial_buffering_time_ms;
  j["RebufferingFrequency"] = r.rebuffering_frequency;
  j["MeanRebufferingTime"] = r.mean_rebuffering_time_ms;
  j["Latitude"] = r.location.latitude;
  j["Longitude"] = r.location.longitude;
  j["Altitude"] = r.location.altitude_m;
  j["Accuracy"] = r.location.accuracy_m;
  j["Time"] = r.location.time;
  j["Provider"] = r.location.provider == LocationProvider::Gps ? "gps" : "network";
  j["ConnectionType"] = r.connection_type;
  j["LAC"] = r.lac;
  j["CellID"] = r.cell_id;
  j["RSSI"] = r.rssi_dbm;
  if (r.video_quality_feedback) j["VideoQualityFeedback"] = *r.video_quality_feedback;
  if (r.audio_quality_feedback) j["AudioQualityFeedback"] = *r.audio_quality_feedback;
  if (r.general_feedback) j["GeneralFeedback"] = *r.general_feedback;
  j["AdditionalComments"] = r.additional_comments;
  j["EstimatedVideoQuality"] = r.estimated_video_quality;
  return j.dump();
}

namespace {

class FieldReader {
 public:
  explicit FieldReader(const ordered_json& j) : j_(j) {}

  const ordered_json& require(const char* name) {
    const auto it = j_.find(name);
    if (it == j_.end()) throw ParseError(std::string("missing required field: ") + name);
    seen_.push_back(name);
    return *it;
  }

  const ordered_json* optional(const char* name) {
    const auto it = j_.find(name);
    if (it == j_.end()) return nullptr;
    seen_.push_back(name);
    return &*it;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
        throw ParseError("unknown field: " + key);
    }
  }

 private:
  const ordered_json& j_;
  std::vector<std::string> seen_;
};

std::string as_string(const ordered_json& j, const char* name) {
  if (!j.is_string()) throw ParseError(std::string(name) + " must be a string");
  return j.get<std::string>();
}

std::int64_t as_int(const ordered_json& j, const char* name) {
  if (!j.is_number_integer()) throw ParseError(std::string(name) + " must be an integer");
  return j.get<std::int64_t>();
}

double as_number(const ordered_json& j, const char* name) {
  if (!j.is_number()) throw ParseError(std::string(name) + " must be a number");
  return j.get<double>();
}

}  // namespace

SessionReport parse(std::string_view text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON record");
  if (!j.is_object()) throw ParseError("report record must be a JSON object");

  FieldReader f(j);
  SessionReport r;
  r.imei = as_string(f.require("IMEI"), "IMEI");
  r.reproduction_mode = static_cast<int>(as_int(f.require("ReproductionMode"), "ReproductionMode"));
  r.reproduction_time_ms = as_int(f.require("ReproductionTime"), "ReproductionTime");
  r.date = as_string(f.require("Date"), "Date");
  r.hour = as_string(f.require("Hour"), "Hour");
  r.initial_buffering_time_ms =
      as_int(f.require("InitialBufferingTime"), "InitialBufferingTime");
  r.rebuffering_frequency = as_number(f.require("RebufferingFrequency"), "RebufferingFrequency");
  r.mean_rebuffering_time_ms = as_int(f.require("MeanRebufferingTime"), "MeanRebufferingTime");
  r.location.latitude = as_number(f.require("Latitude"), "Latitude");
  r.location.longitude = as_number(f.require("Longitude"), "Longitude");
  r.location.altitude_m = as_number(f.require("Altitude"), "Altitude");
  r.location.accuracy_m = as_number(f.require("Accuracy"), "Accuracy");
  r.location.time = as_string(f.require("Time"), "Time");
  const std::string provider = as_string(f.require("Provider"), "Provider");
  if (provider == "gps") {
    r.location.provider = LocationProvider::Gps;
  } else if (provider == "network") {
    r.location.provider = LocationProvider::Network;
  } else {
    throw ParseError("Provider must be \"gps\" or \"network\"");
  }
  r.connection_type = static_cast<int>(as_int(f.require("ConnectionType"), "ConnectionType"));
  r.lac = as_int(f.require("LAC"), "LAC");
  r.cell_id = as_int(f.require("CellID"), "CellID");
  r.rssi_dbm = static_cast<int>(as_int(f.require("RSSI"), "RSSI"));
  for (const auto& [name, dst] :
       {std::pair{"VideoQualityFeedback", &r.video_quality_feedback},
        std::pair{"AudioQualityFeedback", &r.audio_quality_feedback},
        std::pair{"GeneralFeedback", &r.general_feedback}}) {
    if (const auto* field = f.optional(name)) *dst = static_cast<int>(as_int(*field, name));
  }
  if (const auto* comments = f.optional("AdditionalComments"))
    r.additional_comments = as_string(*comments, "AdditionalComments");
  r.estimated_video_quality =
      as_number(f.require("EstimatedVideoQuality"), "EstimatedVideoQuality");
  f.reject_unknown();
  return r;
}

std::string_view connection_type_label(int code) {
  if (code < 0 || code >= static_cast<int>(kConnectionLabels.size()))
    throw ParamError("connection type code must be in [0, 15]");
  return kConnectionLabels[static_cast<std::size_t>(code)];
}

std::optional<int> connection_type_code(std::string_view label) {
  for (std::size_t i = 0; i < kConnectionLabels.size(); ++i)
    if (kConnectionLabels[i] == label) return static_cast<int>(i);
  return std::nullopt;
}

TechnologyGroup technology_group_of_code(int code) {
  if (code == 0) return TechnologyGroup::Wifi;
  // UMTS and its HSPA-family evolutions; everything else was outside the
  // pilot's two groups.
  if (code == 3 || code == 8 || code == 9 || code == 10) return TechnologyGroup::UmtsFamily;
  return TechnologyGroup::Other;
}

TechnologyGroup technology_of(const SessionReport& report) {
  return technology_group_of_code(report.connection_type);
}

std::string_view to_string(TechnologyGroup group) {
  switch (group) {
    case TechnologyGroup::Wifi: return "wifi";
    case TechnologyGroup::UmtsFamily: return "umts_family";
    case TechnologyGroup::Other: return "other";
  }
  return "other";
}

}  // namespace qoe::report
