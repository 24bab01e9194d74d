// Copyright 2026 The LatentProbe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "latentprobe/error.hpp"
#include "latentprobe/indicators.hpp"
#include "latentprobe/random.hpp"
#include "oracles.hpp"

using namespace latentprobe;

namespace {

ModelRecord Record(std::string name, double clean, std::vector<double> severity, double kmeans_purity,
                   double mc_purity) {
  ModelRecord r;
  r.name = std::move(name);
  r.clean_acc = clean;
  r.corruption_grid["mean"] = std::move(severity);
  r.kmeans_acc = kmeans_purity - 1.0;
  r.kmeans_purity = kmeans_purity;
  r.mc_acc = mc_purity - 1.0;
  r.mc_purity = mc_purity;
  return r;
}

std::vector<ModelRecord> Fixture() { return LoadRecords(std::string(LATENTPROBE_DATA_DIR) + "/table2.json"); }

}  // namespace

TEST_CASE("robustness ratio") {
  CHECK(Robustness(20.2, 56.4) == doctest::Approx(0.358).epsilon(1e-3));
  CHECK(Robustness(14.6, 56.4) == doctest::Approx(0.259).epsilon(1e-3));
  CHECK(Robustness(40.0, 40.0) == 1.0);
  CHECK_THROWS_AS(Robustness(1.0, 0.0), Error);
}

TEST_CASE("corruption aggregation") {
  auto one = AggregateCorruptionAccuracy({{"all", {35.9, 25.4, 18.9, 12.7, 8.0}}});
  CHECK(one.overall == doctest::Approx(20.18));
  one = AggregateCorruptionAccuracy({{"all", {72.1, 66.1, 60.2, 51.3, 39.7}}});
  CHECK(one.overall == doctest::Approx(57.88));
  CHECK(AggregateCorruptionAccuracy({{"a", {7, 7, 7}}, {"b", {7, 7, 7}}}).overall == 7.0);

  const std::map<std::string, std::vector<double>> grid = {
      {"blur", {60, 50, 40}}, {"fog", {70, 40, 10}}, {"noise", {30, 20, 25}}};
  const CorruptionAggregate agg = AggregateCorruptionAccuracy(grid);
  CHECK(agg.per_corruption.at("fog") == doctest::Approx(40.0));
  CHECK(agg.per_severity[0] == doctest::Approx(160.0 / 3.0));
  double mean_of_levels = 0.0;
  for (double v : agg.per_severity) mean_of_levels += v / 3.0;
  CHECK(agg.overall == doctest::Approx(mean_of_levels));

  CHECK_THROWS_AS(AggregateCorruptionAccuracy({{"a", {1, 2, 3}}, {"b", {1, 2}}}), Error);
  CHECK_THROWS_AS(AggregateCorruptionAccuracy({}), Error);
}

TEST_CASE("relative and combined indicators") {
  CHECK(RelativePerformance(70.0, 80.2) == doctest::Approx(0.873).epsilon(1e-3));
  CHECK(RelativePerformance(18.4, 56.4) == doctest::Approx(0.326).epsilon(1e-3));
  CHECK(RelativePerformance(50.0, 50.0) == 1.0);
  CHECK(CombinedPurity(71.2, 81.3, 80.2) == doctest::Approx(0.7218).epsilon(1e-4));
  CHECK(CombinedPurity(18.4, 28.1, 56.4) == doctest::Approx(0.0917).epsilon(1e-3));
  CHECK(CombinedPurity(0.0, 50.0, 60.0) == 0.0);
  CHECK_THROWS_AS(RelativePerformance(1.0, 0.0), Error);
  CHECK_THROWS_AS(CombinedPurity(1.0, 1.0, 0.0), Error);
}

TEST_CASE("coefficient of determination") {
  const std::vector<double> xs = {0, 1, 2, 3};
  CHECK(RSquared(xs, std::vector<double>{1, 3, 5, 7}) == doctest::Approx(1.0));

  const std::vector<double> x3 = {0, 1, 2};
  const std::vector<double> y3 = {0, 1, 0};
  const LineFit fit = FitLine(x3, y3);
  CHECK(fit.slope == doctest::Approx(0.0));
  CHECK(fit.intercept == doctest::Approx(1.0 / 3.0));
  CHECK(RSquared(x3, y3) == doctest::Approx(0.0));
  CHECK(RSquared(x3, std::vector<double>{2, 2, 2}) == 0.0);

  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(8), b(8), a2(8), b2(8);
    const double scale = rng.Uniform() < 0.5 ? -3.5 : 0.25;
    for (int i = 0; i < 8; ++i) {
      a[i] = rng.Normal();
      b[i] = a[i] + rng.Normal();
      a2[i] = scale * a[i] + 9.0;
      b2[i] = -2.0 * b[i] + 1.0;
    }
    const double r2 = RSquared(a, b);
    CHECK(r2 >= 0.0);
    CHECK(r2 <= 1.0);
    CHECK(RSquared(a2, b) == doctest::Approx(r2).epsilon(1e-9));
    CHECK(RSquared(a, b2) == doctest::Approx(r2).epsilon(1e-9));
  }
  CHECK_THROWS_AS(RSquared(std::vector<double>{1, 1, 1}, y3), Error);
  CHECK_THROWS_AS(RSquared(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(RSquared(x3, std::vector<double>{1, 2}), Error);
}

TEST_CASE("Kendall tau") {
  const std::vector<double> a = {1, 2, 3, 4};
  CHECK(KendallTau(a, a) == 1.0);
  CHECK(KendallTau(a, std::vector<double>{4, 3, 2, 1}) == -1.0);
  CHECK(KendallTau(a, std::vector<double>{1, 2, 4, 3}) == doctest::Approx(4.0 / 6.0));
  CHECK_THROWS_AS(KendallTau(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}), Error);
  CHECK_THROWS_AS(KendallTau(std::vector<double>{1}, std::vector<double>{1}), Error);

  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.Below(9);
    std::vector<double> x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse values so ties occur.
      x[i] = static_cast<double>(rng.Below(4));
      y[i] = static_cast<double>(rng.Below(4));
      z[i] = std::exp(x[i]) * 3.0 - 1.0;
    }
    const bool all_tied = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
                          std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (all_tied) continue;
    const double tau = KendallTau(x, y);
    CHECK(tau == doctest::Approx(oracle::KendallTauPairs(x, y)).epsilon(1e-12));
    CHECK(KendallTau(z, y) == doctest::Approx(tau).epsilon(1e-12));
  }
}

TEST_CASE("indicator names round-trip") {
  for (Indicator i : AllIndicators()) CHECK(ParseIndicator(IndicatorName(i)) == i);
  CHECK_THROWS_AS(ParseIndicator("purity"), Error);
}

TEST_CASE("indicator values and missing fields") {
  ModelRecord r = Record("m", 80.0, {60, 50}, 40.0, 80.0);
  CHECK(IndicatorValue(r, Indicator::kKmeansPurity) == doctest::Approx(0.5));
  CHECK(IndicatorValue(r, Indicator::kCombinedPurity) == doctest::Approx(0.4 * 0.8 / 0.8));
  CHECK_THROWS_AS(IndicatorValue(r, Indicator::kDeltaBaseline), Error);
  r.delta = 0.3;
  CHECK(IndicatorValue(r, Indicator::kDeltaBaseline) == -0.3);
  r.mc_purity.reset();
  try {
    IndicatorValue(r, Indicator::kMulticutPurity);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchema);
  }
}

TEST_CASE("measured robustness prefers the printed aggregate") {
  ModelRecord r = Record("m", 50.0, {40, 30, 20}, 10, 10);
  CHECK(MeasuredRobustness(r, std::nullopt) == doctest::Approx(0.6));
  r.printed_acc_all = 31.0;
  CHECK(MeasuredRobustness(r, std::nullopt) == doctest::Approx(0.62));
  CHECK(MeasuredRobustness(r, 1) == doctest::Approx(0.8));
  CHECK(MeasuredRobustness(r, 3) == doctest::Approx(0.4));
  CHECK_THROWS_AS(MeasuredRobustness(r, 4), Error);
  CHECK_THROWS_AS(MeasuredRobustness(r, 0), Error);
}

TEST_CASE("correlate on a perfectly monotone set") {
  std::vector<ModelRecord> records = {Record("a", 50, {10}, 10, 50), Record("b", 50, {20}, 20, 50),
                                      Record("c", 50, {30}, 30, 50)};
  const CorrelationReport report = Correlate(records, Indicator::kKmeansPurity);
  CHECK(report.r_squared == doctest::Approx(1.0));
  CHECK(report.kendall_tau == doctest::Approx(1.0));
  CHECK(report.predicted_ranking == std::vector<std::string>{"c", "b", "a"});
  CHECK(report.actual_ranking == report.predicted_ranking);

  records.pop_back();
  CHECK_THROWS_AS(Correlate(records, Indicator::kKmeansPurity), Error);
}

TEST_CASE("ranking ties break by name") {
  std::vector<ModelRecord> records = {Record("zeta", 50, {10}, 20, 50), Record("alpha", 50, {30}, 20, 50),
                                      Record("mid", 50, {20}, 30, 50)};
  const CorrelationReport report = Correlate(records, Indicator::kKmeansPurity);
  CHECK(report.predicted_ranking == std::vector<std::string>{"mid", "alpha", "zeta"});
  CHECK(report.actual_ranking == std::vector<std::string>{"alpha", "mid", "zeta"});
}

TEST_CASE("rankings survive a monotone transform of the indicator") {
  const auto records = Fixture();
  const CorrelationReport base = Correlate(records, Indicator::kKmeansAcc);
  std::vector<ModelRecord> cubed = records;
  for (auto& r : cubed) r.kmeans_acc = std::pow(*r.kmeans_acc / r.clean_acc, 3.0) * r.clean_acc;
  const CorrelationReport c = Correlate(cubed, Indicator::kKmeansAcc);
  CHECK(c.r_squared != doctest::Approx(base.r_squared));
  CHECK(c.actual_ranking == base.actual_ranking);
  CHECK(c.kendall_tau == doctest::Approx(base.kendall_tau).epsilon(1e-12));
  CHECK(c.predicted_ranking == base.predicted_ranking);
}

TEST_CASE("bundled fixture") {
  const auto records = Fixture();
  REQUIRE(records.size() == 12);
  CHECK(records.front().name == "alexnet");
  CHECK(records.front().clean_acc == 56.4);
  CHECK(*records.front().printed_acc_all == 20.2);

  const CorrelationReport combined = Correlate(records, Indicator::kCombinedPurity);
  CHECK(combined.r_squared == doctest::Approx(0.87).epsilon(0.03 / 0.87));
  const CorrelationReport km = Correlate(records, Indicator::kKmeansAcc);
  CHECK(km.kendall_tau == doctest::Approx(0.79).epsilon(0.02 / 0.79));
  const std::vector<std::string> tail(km.predicted_ranking.end() - 3, km.predicted_ranking.end());
  CHECK(std::is_permutation(tail.begin(), tail.end(), std::vector<std::string>{"alexnet", "vgg11", "vgg16"}.begin()));
  CHECK(km.points.front().indicator * 100.0 == doctest::Approx(25.9).epsilon(0.1 / 25.9));
  CHECK(km.points.front().robustness * 100.0 == doctest::Approx(35.8).epsilon(0.1 / 35.8));
}

TEST_CASE("record parsing") {
  const auto records = ParseRecords(R"({"models": [
      {"name": "grid", "clean": 70, "corruptions": {"fog": [50, 40], "snow": [30, 20]},
       "kmeans": {"acc": 30, "purity": 35}, "delta": -0.5},
      {"name": "means", "clean": 60, "severity": [40, 30], "acc_all": 35.1}]})");
  REQUIRE(records.size() == 2);
  CHECK(records[0].corruption_grid.size() == 2);
  CHECK(MeasuredRobustness(records[0], std::nullopt) == doctest::Approx(35.0 / 70.0));
  CHECK(*records[0].delta == -0.5);
  CHECK_FALSE(records[0].mc_purity.has_value());
  CHECK(*records[1].printed_acc_all == 35.1);

  auto code_of = [](const std::string& text) {
    try {
      ParseRecords(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  CHECK(code_of("not json") == ErrorCode::kSchema);
  CHECK(code_of(R"({"models": {}})") == ErrorCode::kSchema);
  CHECK(code_of(R"({"models": [{"clean": 50, "severity": [1]}]})") == ErrorCode::kSchema);
  CHECK(code_of(R"({"models": [{"name": "x", "clean": 150, "severity": [1]}]})") == ErrorCode::kSchema);
  CHECK(code_of(R"({"models": [{"name": "x", "clean": 50}]})") == ErrorCode::kSchema);
  CHECK(code_of(R"({"models": [{"name": "x", "clean": 50, "severity": [1], "corruptions": {"a": [1]}}]})") ==
        ErrorCode::kSchema);
  CHECK_THROWS_AS(LoadRecords("/nonexistent/records.json"), Error);
}
