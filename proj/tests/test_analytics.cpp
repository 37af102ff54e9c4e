#include <doctest.h>

#include <random>

#include "qoe/analytics.hpp"
#include "support/brute_stats.hpp"
#include "support/report_gen.hpp"

using namespace qoe;
using namespace qoe::analytics;

namespace {

std::vector<double> random_sample(std::mt19937& rng, std::size_t min_n = 1) {
  std::uniform_int_distribution<std::size_t> n_d(min_n, 60);
  std::uniform_real_distribution<double> v_d(-50, 200);
  std::vector<double> v(n_d(rng));
  for (auto& x : v) x = v_d(rng);
  // Occasionally inject far-out points so fences get exercised.
  std::uniform_real_distribution<double> unit(0, 1);
  if (unit(rng) < 0.4 && !v.empty()) v[0] = 5000 * (unit(rng) - 0.5);
  return v;
}

}  // namespace

TEST_CASE("summary fixtures") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto s = summarize(v);
  CHECK(s.n == 5);
  CHECK(s.mean == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.median == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.std_dev == doctest::Approx(1.5811388300841898).epsilon(1e-12));
  CHECK(s.min == 1);
  CHECK(s.max == 5);
  REQUIRE(s.cv);
  CHECK(*s.cv == doctest::Approx(1.5811388300841898 / 3.0).epsilon(1e-12));

  const std::vector<double> single{7};
  const auto s1 = summarize(single);
  CHECK(s1.mean == 7);
  CHECK(s1.median == 7);
  CHECK(s1.min == 7);
  CHECK(s1.max == 7);
  CHECK(s1.std_dev == 0);

  CHECK_THROWS_AS(summarize(std::vector<double>{}), ParamError);

  const std::vector<double> zero_mean{-1, 1};
  CHECK(!summarize(zero_mean).cv);
}

TEST_CASE("box fixtures: {1,2,3,4,100}") {
  const std::vector<double> v{1, 2, 3, 4, 100};
  const auto b = box_whisker(v);
  CHECK(b.q1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.median == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(b.q3 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(b.iqr == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.whisker_low == 1);
  CHECK(b.whisker_high == 4);  // inner fence is 7; nothing between 4 and 7
  REQUIRE(b.outliers.size() == 1);
  CHECK(b.outliers[0] == 100);  // beyond 7
  REQUIRE(b.extremes.size() == 1);
  CHECK(b.extremes[0] == 100);  // beyond 10
}

TEST_CASE("degenerate and boundary boxes") {
  SUBCASE("all-equal sample has no outliers") {
    const std::vector<double> v{5, 5, 5, 5, 5, 5};
    const auto b = box_whisker(v);
    CHECK(b.iqr == 0);
    CHECK(b.outliers.empty());
    CHECK(b.whisker_low == 5);
    CHECK(b.whisker_high == 5);
  }
  SUBCASE("a point exactly on the fence is not an outlier") {
    // q1=2, q3=4, iqr=2 -> upper fence exactly 7.
    const std::vector<double> v{1, 2, 3, 4, 7};
    const auto b = box_whisker(v);
    CHECK(b.q3 == doctest::Approx(4.0));
    CHECK(b.outliers.empty());
    CHECK(b.whisker_high == 7);
  }
  SUBCASE("outlier but not extreme") {
    // upper fences 7 and 10: 9 is an outlier, not an extreme.
    const std::vector<double> v{1, 2, 3, 4, 9};
    const auto b = box_whisker(v);
    REQUIRE(b.outliers.size() == 1);
    CHECK(b.extremes.empty());
  }
  CHECK_THROWS_AS(box_whisker(std::vector<double>{1, 2, 3}), ParamError);
}

TEST_CASE("ecdf fixtures and monotonicity") {
  const std::vector<double> v{1, 2, 2, 4};
  const Ecdf f(v);
  CHECK(f(2) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(f(1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(f(0.999) == 0);  // just below the minimum
  CHECK(f(0) == 0);
  CHECK(f(4) == 1);
  CHECK(f(1e9) == 1);

  std::mt19937 rng(3);
  const auto sample = random_sample(rng, 2);
  const Ecdf g(sample);
  double prev = 0;
  for (double x = -6000; x <= 6000; x += 37.5) {
    const double y = g(x);
    CHECK(y >= prev);
    CHECK(y >= 0);
    CHECK(y <= 1);
    prev = y;
  }
  CHECK_THROWS_AS(Ecdf(std::vector<double>{}), ParamError);
}

TEST_CASE("summaries, boxes and ecdf agree with brute force on 100 samples") {
  std::mt19937 rng(1234);
  for (int i = 0; i < 100; ++i) {
    const auto v = random_sample(rng, 4);

    const auto s = summarize(v);
    CHECK(s.mean == doctest::Approx(brute::mean(v)).epsilon(1e-9));
    CHECK(s.std_dev == doctest::Approx(brute::stddev(v)).epsilon(1e-9));
    CHECK(s.median == doctest::Approx(brute::median(v)).epsilon(1e-9));
    CHECK(s.min == *std::min_element(v.begin(), v.end()));
    CHECK(s.max == *std::max_element(v.begin(), v.end()));

    const auto b = box_whisker(v);
    const auto rb = brute::box(v);
    CHECK(b.q1 == doctest::Approx(rb.q1).epsilon(1e-9));
    CHECK(b.median == doctest::Approx(rb.med).epsilon(1e-9));
    CHECK(b.q3 == doctest::Approx(rb.q3).epsilon(1e-9));
    auto outliers = b.outliers;
    std::sort(outliers.begin(), outliers.end());
    CHECK(outliers == rb.outliers);
    auto extremes = b.extremes;
    std::sort(extremes.begin(), extremes.end());
    CHECK(extremes == rb.extremes);
    CHECK(b.whisker_low == rb.within.front());
    CHECK(b.whisker_high == rb.within.back());
    // extremes are a subset of outliers by construction of the fences
    for (double e : extremes) CHECK(std::find(outliers.begin(), outliers.end(), e) != outliers.end());

    const Ecdf f(v);
    std::uniform_real_distribution<double> q(-3000, 3000);
    for (int k = 0; k < 20; ++k) {
      const double x = q(rng);
      CHECK(f(x) == doctest::Approx(brute::ecdf_at(v, x)).epsilon(1e-12));
    }
    for (double x : v) CHECK(f(x) == doctest::Approx(brute::ecdf_at(v, x)).epsilon(1e-12));
  }
}

TEST_CASE("through-origin fit fixtures") {
  SUBCASE("exact line") {
    const std::vector<double> x{1, 2, 3}, y{1.2, 2.4, 3.6};
    const auto f = fit_through_origin(x, y);
    CHECK(f.slope == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("slope 6/5 with uncentered r2 0.9") {
    const std::vector<double> x{1, 2}, y{2, 2};
    const auto f = fit_through_origin(x, y);
    CHECK(f.slope == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(0.9).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fit_through_origin(std::vector<double>{1}, std::vector<double>{1}),
                    ParamError);
    CHECK_THROWS_AS(fit_through_origin(std::vector<double>{1, 2}, std::vector<double>{1}),
                    ParamError);
    CHECK_THROWS_AS(fit_through_origin(std::vector<double>{0, 0}, std::vector<double>{1, 2}),
                    ParamError);
  }
}

TEST_CASE("slope recovery from noisy synthetic pairs") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> x_d(1.4844, 3.3148);
  std::uniform_real_distribution<double> noise(-0.3, 0.3);
  std::vector<double> x, y;
  for (int i = 0; i < 1000; ++i) {
    x.push_back(x_d(rng));
    y.push_back(1.1935 * x.back() + noise(rng));
  }
  const auto f = fit_through_origin(x, y);
  CHECK(std::abs(f.slope - 1.1935) < 0.02);
  CHECK(f.r_squared > 0.9);
  CHECK(f.r_squared <= 1.0);
}

TEST_CASE("fit scaling properties") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> d(0.5, 5);
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(d(rng));
    y.push_back(d(rng));
  }
  const double base = fit_through_origin(x, y).slope;
  for (double k : {0.5, 2.0, 17.0}) {
    std::vector<double> ky = y, kx = x;
    for (auto& v : ky) v *= k;
    CHECK(fit_through_origin(x, ky).slope == doctest::Approx(k * base).epsilon(1e-9));
    for (auto& v : kx) v *= k;
    CHECK(fit_through_origin(kx, ky).slope == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("residual report") {
  SUBCASE("model equals reported") {
    const std::vector<double> m{3, 4, 2.5};
    const auto r = residuals(m, m, {});
    CHECK(r.frac_within_half == 1.0);
    CHECK(r.frac_model_below_reported == 0.0);
    std::size_t total = 0;
    for (auto c : r.counts) total += c;
    CHECK(total == 3);
  }
  SUBCASE("model one point below reported") {
    const std::vector<double> model{2, 3, 4};
    const std::vector<double> reported{3, 4, 5};
    const auto r = residuals(model, reported, {});
    CHECK(r.frac_within_half == 0.0);
    CHECK(r.frac_model_below_reported == 1.0);
  }
  SUBCASE("mixed set matches direct counting") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> mos(1, 5);
    std::vector<double> model, reported;
    for (int i = 0; i < 500; ++i) {
      model.push_back(mos(rng));
      reported.push_back(mos(rng));
    }
    const auto r = residuals(model, reported, {});
    std::size_t within = 0, below = 0;
    for (int i = 0; i < 500; ++i) {
      const double d = model[static_cast<std::size_t>(i)] - reported[static_cast<std::size_t>(i)];
      if (std::abs(d) <= 0.5) ++within;
      if (d < 0) ++below;
    }
    CHECK(r.frac_within_half == doctest::Approx(within / 500.0).epsilon(1e-12));
    CHECK(r.frac_model_below_reported == doctest::Approx(below / 500.0).epsilon(1e-12));
    std::size_t total = 0;
    for (auto c : r.counts) total += c;
    CHECK(total == 500);
    CHECK(r.bin_edges.size() == r.counts.size() + 1);
  }
  SUBCASE("fitted predictions have zero mean residual on the fitting set") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> x_d(1.5, 3.3);
    std::uniform_real_distribution<double> noise(-0.4, 0.4);
    std::vector<double> x, y;
    for (int i = 0; i < 400; ++i) {
      x.push_back(x_d(rng));
      y.push_back(1.2 * x.back() + noise(rng));
    }
    const auto fit = fit_through_origin(x, y);
    // Through-origin least squares makes sum(x_i * r_i) = 0, not sum(r_i) = 0;
    // the near-zero mean here comes from x being bounded away from zero.
    double weighted = 0;
    for (std::size_t i = 0; i < x.size(); ++i) weighted += x[i] * (y[i] - fit.slope * x[i]);
    CHECK(std::abs(weighted) / static_cast<double>(x.size()) < 1e-9);
  }
  CHECK_THROWS_AS(residuals(std::vector<double>{1}, std::vector<double>{1, 2}, {}), ParamError);
}

TEST_CASE("mos distribution") {
  std::mt19937 rng(55);
  auto make = [&](int fb, int conn) {
    auto r = testgen::random_report(rng);
    r.general_feedback = fb;
    r.connection_type = conn;
    return r;
  };

  SUBCASE("fixture: {3,3,4,5} in one group") {
    std::vector<report::SessionReport> reports{make(3, 0), make(3, 0), make(4, 0), make(5, 0)};
    const auto rows = mos_distribution(reports, false);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].group == "all");
    CHECK(rows[0].n == 4);
    CHECK(rows[0].percent[0] == 0);
    CHECK(rows[0].percent[1] == 0);
    CHECK(rows[0].percent[2] == doctest::Approx(50.0));
    CHECK(rows[0].percent[3] == doctest::Approx(25.0));
    CHECK(rows[0].percent[4] == doctest::Approx(25.0));
    CHECK(rows[0].average == doctest::Approx(3.75).epsilon(1e-12));
    CHECK(rows[0].std_dev == doctest::Approx(0.9574271077563381).epsilon(1e-9));
  }
  SUBCASE("single report occupies its whole bin") {
    std::vector<report::SessionReport> reports{make(2, 0)};
    const auto rows = mos_distribution(reports, false);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].percent[1] == doctest::Approx(100.0));
    CHECK(rows[0].std_dev == 0);
  }
  SUBCASE("grouped and ungrouped counts partition the same total") {
    std::vector<report::SessionReport> reports;
    for (int i = 0; i < 60; ++i) reports.push_back(testgen::random_report(rng));
    const auto grouped = mos_distribution(reports, true);
    const auto flat = mos_distribution(reports, false);
    std::size_t grouped_n = 0;
    for (const auto& row : grouped) {
      grouped_n += row.n;
      double sum = 0;
      for (double p : row.percent) sum += p;
      CHECK(std::abs(sum - 100.0) < 0.01);
    }
    REQUIRE(flat.size() == 1);
    CHECK(grouped_n == flat[0].n);
  }
  SUBCASE("reports without feedback are skipped") {
    auto r = make(4, 0);
    auto no_fb = testgen::random_report(rng);
    no_fb.general_feedback.reset();
    const std::vector<report::SessionReport> reports{r, no_fb};
    const auto rows = mos_distribution(reports, false);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n == 1);
  }
}
