#include "qoe/collector.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include <httplib.h>

namespace qoe::collector {

namespace {

using nlohmann::ordered_json;

double metric_value(const report::SessionReport& r, StatsMetric metric) {
  switch (metric) {
    case StatsMetric::TInit: return static_cast<double>(r.initial_buffering_time_ms) / 1000.0;
    case StatsMetric::FRebuf: return r.rebuffering_frequency;
    case StatsMetric::TRebuf: return static_cast<double>(r.mean_rebuffering_time_ms) / 1000.0;
    case StatsMetric::Mos: return r.estimated_video_quality;
  }
  return 0;
}

std::map<std::string, std::vector<double>> group_values(
    const std::vector<store::ReportStore::Record>& records, StatsMetric metric, bool grouped) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& rec : records) {
    const std::string key =
        grouped ? std::string(report::to_string(report::technology_of(rec.report))) : "all";
    groups[key].push_back(metric_value(rec.report, metric));
  }
  return groups;
}

ordered_json summary_json(const analytics::SampleSummary& s) {
  ordered_json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["std_dev"] = s.std_dev;
  j["min"] = s.min;
  j["max"] = s.max;
  if (s.cv) j["cv"] = *s.cv;
  return j;
}

ordered_json box_json(const analytics::BoxStats& b) {
  ordered_json j;
  j["q1"] = b.q1;
  j["median"] = b.median;
  j["q3"] = b.q3;
  j["iqr"] = b.iqr;
  j["whisker_low"] = b.whisker_low;
  j["whisker_high"] = b.whisker_high;
  j["outliers"] = b.outliers;
  j["extremes"] = b.extremes;
  return j;
}

}  // namespace

std::optional<StatsMetric> stats_metric_from_name(std::string_view name) {
  if (name == "t_init") return StatsMetric::TInit;
  if (name == "f_rebuf") return StatsMetric::FRebuf;
  if (name == "t_rebuf") return StatsMetric::TRebuf;
  if (name == "mos") return StatsMetric::Mos;
  return std::nullopt;
}

std::string_view to_string(StatsMetric metric) {
  switch (metric) {
    case StatsMetric::TInit: return "t_init";
    case StatsMetric::FRebuf: return "f_rebuf";
    case StatsMetric::TRebuf: return "t_rebuf";
    case StatsMetric::Mos: return "mos";
  }
  return "t_init";
}

StatsResult query_stats(const store::ReportStore& store, StatsMetric metric,
                        bool group_by_technology) {
  StatsResult result;
  result.metric = metric;
  result.grouped = group_by_technology;

  const auto records = store.snapshot();
  if (metric == StatsMetric::Mos) {
    std::vector<report::SessionReport> reports;
    reports.reserve(records.size());
    for (const auto& rec : records) reports.push_back(rec.report);
    result.distribution = analytics::mos_distribution(reports, group_by_technology);
    result.empty = result.distribution.empty();
    return result;
  }

  for (auto& [key, values] : group_values(records, metric, group_by_technology)) {
    GroupStats g;
    g.group = key;
    g.n = values.size();
    g.summary = analytics::summarize(values);
    if (values.size() >= 4) g.box = analytics::box_whisker(values);
    result.groups.push_back(std::move(g));
  }
  result.empty = result.groups.empty();
  return result;
}

nlohmann::ordered_json to_json(const StatsResult& result) {
  ordered_json j;
  j["status"] = result.empty ? "empty" : "ok";
  j["metric"] = to_string(result.metric);
  j["group_by"] = result.grouped ? "technology" : "none";
  if (result.metric == StatsMetric::Mos) {
    j["distribution"] = ordered_json::array();
    for (const auto& row : result.distribution) {
      ordered_json r;
      r["group"] = row.group;
      r["n"] = row.n;
      for (int mos = 1; mos <= 5; ++mos)
        r["percent_mos_" + std::to_string(mos)] = row.percent[static_cast<std::size_t>(mos - 1)];
      r["average"] = row.average;
      r["std_dev"] = row.std_dev;
      j["distribution"].push_back(std::move(r));
    }
  } else {
    j["groups"] = ordered_json::array();
    for (const auto& g : result.groups) {
      ordered_json r;
      r["group"] = g.group;
      r["summary"] = summary_json(g.summary);
      if (g.box) r["box"] = box_json(*g.box);
      j["groups"].push_back(std::move(r));
    }
  }
  return j;
}

std::vector<EcdfSeries> query_ecdf(const store::ReportStore& store, StatsMetric metric,
                                   bool group_by_technology) {
  if (metric == StatsMetric::Mos)
    throw ParamError("ecdf export applies to t_init, f_rebuf and t_rebuf");
  std::vector<EcdfSeries> out;
  for (auto& [key, values] : group_values(store.snapshot(), metric, group_by_technology)) {
    std::sort(values.begin(), values.end());
    out.push_back({key, std::move(values)});
  }
  return out;
}

std::pair<std::string, int> parse_listen_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= address.size())
    throw ParamError("listen address must be host:port");
  int port = 0;
  try {
    port = std::stoi(address.substr(colon + 1));
  } catch (const std::exception&) {
    throw ParamError("listen address port is not a number");
  }
  if (port < 1 || port > 65535) throw ParamError("listen port must be in [1, 65535]");
  return {address.substr(0, colon), port};
}

struct CollectorServer::Impl {
  explicit Impl(store::ReportStore& s) : store(s) {}
  store::ReportStore& store;
  httplib::Server server;
  std::thread worker;
};

CollectorServer::CollectorServer(store::ReportStore& store) : impl_(new Impl(store)) {
  auto& svr = impl_->server;

  svr.Post("/reports", [this](const httplib::Request& req, httplib::Response& res) {
    ordered_json body;
    res.set_header("Content-Type", "application/json");
    try {
      const auto result = impl_->store.ingest_text(req.body);
      if (result.accepted) {
        body["status"] = "created";
        body["seq"] = result.seq;
        res.status = 201;
      } else {
        body["status"] = "unprocessable";
        body["violations"] = ordered_json::array();
        for (const auto& v : result.violations)
          body["violations"].push_back({{"field", v.field}, {"message", v.message}});
        res.status = 422;
      }
    } catch (const ParseError& e) {
      body["status"] = "bad_request";
      body["error"] = e.what();
      res.status = 400;
    } catch (const std::exception& e) {
      body["status"] = "error";
      body["error"] = e.what();
      res.status = 500;
    }
    res.body = body.dump();
  });

  svr.Get("/stats", [this](const httplib::Request& req, httplib::Response& res) {
    res.set_header("Content-Type", "application/json");
    const auto metric = stats_metric_from_name(req.get_param_value("metric"));
    if (!metric) {
      res.status = 400;
      res.body = ordered_json{{"status", "bad_request"},
                              {"error", "metric must be one of t_init, f_rebuf, t_rebuf, mos"}}
                     .dump();
      return;
    }
    const std::string group_by = req.get_param_value("group_by");
    if (!group_by.empty() && group_by != "technology") {
      res.status = 400;
      res.body =
          ordered_json{{"status", "bad_request"}, {"error", "group_by must be technology"}}.dump();
      return;
    }
    const auto result = query_stats(impl_->store, *metric, group_by == "technology");
    res.status = 200;
    res.body = to_json(result).dump();
  });

  svr.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Content-Type", "application/json");
    res.body = "{\"status\":\"ok\"}";
  });
}

CollectorServer::~CollectorServer() { stop(); }

bool CollectorServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int CollectorServer::start_async(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) throw StoreError("collector cannot bind to " + host);
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void CollectorServer::stop() {
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace qoe::collector
