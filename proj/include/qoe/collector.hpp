#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qoe/analytics.hpp"
#include "qoe/store.hpp"

namespace qoe::collector {

enum class StatsMetric { TInit, FRebuf, TRebuf, Mos };

std::optional<StatsMetric> stats_metric_from_name(std::string_view name);
std::string_view to_string(StatsMetric metric);

/// Aggregates for one technology group (or "all").
struct GroupStats {
  std::string group;
  std::size_t n = 0;
  analytics::SampleSummary summary;
  std::optional<analytics::BoxStats> box;  // present when n >= 4
};

struct StatsResult {
  StatsMetric metric = StatsMetric::TInit;
  bool grouped = false;
  bool empty = false;
  std::vector<GroupStats> groups;                       // numeric metrics
  std::vector<analytics::MosDistributionRow> distribution;  // metric == Mos
};

/// Runs the requested aggregation over the stored reports. Report times are
/// in milliseconds on the wire; results here are in seconds.
StatsResult query_stats(const store::ReportStore& store, StatsMetric metric,
                        bool group_by_technology);

nlohmann::ordered_json to_json(const StatsResult& result);

/// ECDF sample of one metric per group, for CSV/plot export.
struct EcdfSeries {
  std::string group;
  std::vector<double> sorted_values;
};

std::vector<EcdfSeries> query_ecdf(const store::ReportStore& store, StatsMetric metric,
                                   bool group_by_technology);

/// The QoE collector service: POST /reports, GET /stats, GET /healthz.
class CollectorServer {
 public:
  explicit CollectorServer(store::ReportStore& store);
  ~CollectorServer();

  CollectorServer(const CollectorServer&) = delete;
  CollectorServer& operator=(const CollectorServer&) = delete;

  /// Blocks serving until stop(). Returns false if the address cannot be bound.
  bool listen(const std::string& host, int port);

  /// Binds to an OS-assigned port and serves from a background thread.
  /// Returns the bound port. Intended for tests.
  int start_async(const std::string& host);

  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; throws ParamError on malformed input.
std::pair<std::string, int> parse_listen_address(const std::string& address);

}  // namespace qoe::collector
