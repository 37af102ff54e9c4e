#include "qoe/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace qoe::analytics {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ParamError("quantile of empty sample");
  if (p < 0 || p > 1) throw ParamError("quantile p must be in [0, 1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted[sorted.size() - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

SampleSummary summarize(std::span<const double> sample) {
  if (sample.empty()) throw ParamError("summarize requires n >= 1");

  SampleSummary s;
  s.n = sample.size();
  s.mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(s.n);

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = quantile_sorted(sorted, 0.5);

  if (s.n > 1) {
    double ss = 0;
    for (double v : sample) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  if (s.mean != 0) s.cv = s.std_dev / s.mean;
  return s;
}

BoxStats box_whisker(std::span<const double> sample) {
  if (sample.size() < 4) throw ParamError("box_whisker requires n >= 4");

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());

  BoxStats b;
  b.q1 = quantile_sorted(sorted, 0.25);
  b.median = quantile_sorted(sorted, 0.5);
  b.q3 = quantile_sorted(sorted, 0.75);
  b.iqr = b.q3 - b.q1;

  const double inner_lo = b.q1 - 1.5 * b.iqr;
  const double inner_hi = b.q3 + 1.5 * b.iqr;
  const double outer_lo = b.q1 - 3.0 * b.iqr;
  const double outer_hi = b.q3 + 3.0 * b.iqr;

  // Whiskers sit on the furthest data points inside the inner fences.
  bool any_within = false;
  for (double v : sorted) {
    if (v >= inner_lo && v <= inner_hi) {
      if (!any_within) b.whisker_low = v;
      b.whisker_high = v;
      any_within = true;
    } else {
      b.outliers.push_back(v);
      if (v < outer_lo || v > outer_hi) b.extremes.push_back(v);
    }
  }
  if (!any_within) {  // degenerate: every datum flagged; collapse to the box
    b.whisker_low = b.q1;
    b.whisker_high = b.q3;
  }
  return b;
}

Ecdf::Ecdf(std::span<const double> sample) : sorted_(sample.begin(), sample.end()) {
  if (sorted_.empty()) throw ParamError("ecdf requires n >= 1");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

RegressionFit fit_through_origin(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ParamError("x and y must have equal length");
  if (x.size() < 2) throw ParamError("fit requires n >= 2");

  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
  }
  if (sxx == 0) throw ParamError("fit is degenerate: all x are zero");

  RegressionFit f;
  f.n = x.size();
  f.slope = sxy / sxx;

  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.slope * x[i];
    ss_res += r * r;
  }
  f.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;

  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
  }
  f.pearson_r = (vx > 0 && vy > 0) ? cov / std::sqrt(vx * vy)
                                   : std::numeric_limits<double>::quiet_NaN();
  return f;
}

ResidualReport residuals(std::span<const double> model_mos, std::span<const double> reported_mos,
                         const HistogramSpec& spec) {
  if (model_mos.size() != reported_mos.size())
    throw ParamError("model and reported series must have equal length");
  if (model_mos.empty()) throw ParamError("residuals require n >= 1");
  if (spec.bins < 1 || !(spec.lo < spec.hi)) throw ParamError("invalid histogram spec");

  ResidualReport r;
  r.n = model_mos.size();
  r.counts.assign(static_cast<std::size_t>(spec.bins), 0);
  const double width = (spec.hi - spec.lo) / spec.bins;
  for (int i = 0; i <= spec.bins; ++i) r.bin_edges.push_back(spec.lo + width * i);

  std::size_t within_half = 0, below = 0;
  for (std::size_t i = 0; i < model_mos.size(); ++i) {
    const double d = model_mos[i] - reported_mos[i];
    if (std::abs(d) <= 0.5) ++within_half;
    if (d < 0) ++below;
    auto bin = static_cast<long>(std::floor((d - spec.lo) / width));
    bin = std::clamp(bin, 0L, static_cast<long>(spec.bins - 1));
    ++r.counts[static_cast<std::size_t>(bin)];
  }
  r.frac_within_half = static_cast<double>(within_half) / static_cast<double>(r.n);
  r.frac_model_below_reported = static_cast<double>(below) / static_cast<double>(r.n);
  return r;
}

std::vector<MosDistributionRow> mos_distribution(std::span<const report::SessionReport> reports,
                                                 bool group_by_technology) {
  std::map<std::string, std::vector<int>> groups;
  for (const auto& rep : reports) {
    if (!rep.general_feedback) continue;  // not part of the survey population
    if (*rep.general_feedback < 1 || *rep.general_feedback > 5)
      throw ParamError("general_feedback out of the 1..5 scale");
    const std::string key =
        group_by_technology ? std::string(report::to_string(technology_of(rep))) : "all";
    groups[key].push_back(*rep.general_feedback);
  }

  std::vector<MosDistributionRow> rows;
  for (const auto& [key, scores] : groups) {
    MosDistributionRow row;
    row.group = key;
    row.n = scores.size();
    double sum = 0;
    for (int s : scores) {
      row.percent[static_cast<std::size_t>(s - 1)] += 1;
      sum += s;
    }
    for (auto& p : row.percent) p = 100.0 * p / static_cast<double>(row.n);
    row.average = sum / static_cast<double>(row.n);
    if (row.n > 1) {
      double ss = 0;
      for (int s : scores) ss += (s - row.average) * (s - row.average);
      row.std_dev = std::sqrt(ss / static_cast<double>(row.n - 1));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qoe::analytics
