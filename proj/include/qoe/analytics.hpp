#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qoe/errors.hpp"
#include "qoe/report_schema.hpp"

namespace qoe::analytics {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0;
  double median = 0;
  double std_dev = 0;  // n-1 denominator
  double min = 0;
  double max = 0;
  std::optional<double> cv;  // std/mean, absent when mean == 0
};

SampleSummary summarize(std::span<const double> sample);

/// Box-and-whiskers decomposition with 1.5*IQR outlier fences and 3*IQR
/// extreme fences. Points beyond a fence (strictly) are flagged.
struct BoxStats {
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double iqr = 0;
  double whisker_low = 0;   // furthest datum within the inner fences
  double whisker_high = 0;
  std::vector<double> outliers;
  std::vector<double> extremes;  // subset of outliers
};

BoxStats box_whisker(std::span<const double> sample);

/// Right-continuous empirical CDF: operator()(x) = fraction of values <= x.
class Ecdf {
 public:
  explicit Ecdf(std::span<const double> sample);
  double operator()(double x) const;
  const std::vector<double>& sorted_values() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// Least-squares line constrained through the origin. r_squared uses the
/// uncentered total sum of squares, the standard definition for no-intercept
/// fits; pearson_r is the ordinary centered correlation.
struct RegressionFit {
  double slope = 0;
  double r_squared = 0;
  double pearson_r = 0;
  std::size_t n = 0;
};

RegressionFit fit_through_origin(std::span<const double> x, std::span<const double> y);

struct HistogramSpec {
  double lo = -4;
  double hi = 4;
  int bins = 21;
};

/// Distribution of (model MOS - reported MOS). Differences outside [lo, hi]
/// are counted in the edge bins so counts always sum to n.
struct ResidualReport {
  std::vector<double> bin_edges;   // bins + 1 edges
  std::vector<std::size_t> counts;
  double frac_within_half = 0;          // |diff| <= 0.5
  double frac_model_below_reported = 0; // diff < 0
  std::size_t n = 0;
};

ResidualReport residuals(std::span<const double> model_mos, std::span<const double> reported_mos,
                         const HistogramSpec& spec = {});

/// Table-8 style share of reported MOS values per technology group.
struct MosDistributionRow {
  std::string group;
  std::size_t n = 0;
  std::array<double, 5> percent{};  // MOS 1..5, sums to 100 per row
  double average = 0;
  double std_dev = 0;
};

/// Groups reports by technology (or a single "all" row) and tabulates the
/// reported GeneralFeedback. Reports without feedback are not part of the
/// survey population and are skipped; groups with no reports are omitted.
std::vector<MosDistributionRow> mos_distribution(std::span<const report::SessionReport> reports,
                                                 bool group_by_technology);

/// Type-7 quantile (linear interpolation) over an already sorted sample.
double quantile_sorted(std::span<const double> sorted, double p);

}  // namespace qoe::analytics
