/*
 * Copyright 2026 The bayesreg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "bayesreg/errors.hpp"
#include "bayesreg/risk_lab.hpp"

using namespace bayesreg;

namespace {

struct ThreadCapGuard {
  explicit ThreadCapGuard(const char* value) {
    setenv("BAYES_REGRESS_THREADS", value, 1);
  }
  ~ThreadCapGuard() { unsetenv("BAYES_REGRESS_THREADS"); }
};

RiskOptions risk_options(EstimatorId estimator, std::vector<std::size_t> schedule,
                         std::size_t replications, int loss_k,
                         std::uint64_t seed, TrimBand trim = {}) {
  RiskOptions options;
  options.estimator = estimator;
  options.n_schedule = std::move(schedule);
  options.replications = replications;
  options.loss_k = loss_k;
  options.trim = trim;
  options.seed = Seed{seed};
  return options;
}

bool identical(const RiskCurve& a, const RiskCurve& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].estimate != b.rows[i].estimate) return false;
    if (a.rows[i].mc_se != b.rows[i].mc_se) return false;
    if (a.rows[i].n != b.rows[i].n) return false;
  }
  return a.fallbacks == b.fallbacks;
}

}  // namespace

TEST_CASE("estimator id parsing and spelling") {
  CHECK(parse_estimator_id("truth") == EstimatorId::truth);
  CHECK(parse_estimator_id("bayes-closed") == EstimatorId::bayes_closed);
  CHECK(parse_estimator_id("bayes-closed(beta-posterior)") ==
        EstimatorId::bayes_closed);
  CHECK(parse_estimator_id("bayes-closed(paper)") ==
        EstimatorId::bayes_closed_paper);
  CHECK(parse_estimator_id("bayes-closed-paper") ==
        EstimatorId::bayes_closed_paper);
  CHECK(parse_estimator_id("bayes-grid") == EstimatorId::bayes_grid);
  CHECK(parse_estimator_id("nadaraya-watson") == EstimatorId::nadaraya_watson);
  CHECK_THROWS_AS(parse_estimator_id("ridge"), UsageError);

  for (const EstimatorId id :
       {EstimatorId::truth, EstimatorId::bayes_closed,
        EstimatorId::bayes_closed_paper, EstimatorId::bayes_grid,
        EstimatorId::nadaraya_watson}) {
    CHECK(parse_estimator_id(to_string(id)) == id);
  }
}

TEST_CASE("sample_quantile") {
  CHECK(sample_quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(sample_quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
  CHECK(sample_quantile({5.0}, 0.9) == 5.0);
  CHECK(sample_quantile({1.0, 3.0}, 0.25) == 1.5);
  CHECK_THROWS_AS(sample_quantile({}, 0.5), UsageError);
  CHECK_THROWS_AS(sample_quantile({1.0}, 1.5), UsageError);
}

TEST_CASE("option validation") {
  const HyperParams hp = Example3{};
  CHECK_THROWS_AS(bayes_risk(hp, risk_options(EstimatorId::truth, {}, 10, 2, 1)),
                  UsageError);
  CHECK_THROWS_AS(
      bayes_risk(hp, risk_options(EstimatorId::truth, {5, 5}, 10, 2, 1)),
      UsageError);
  CHECK_THROWS_AS(
      bayes_risk(hp, risk_options(EstimatorId::truth, {0, 5}, 10, 2, 1)),
      UsageError);
  CHECK_THROWS_AS(bayes_risk(hp, risk_options(EstimatorId::truth, {5}, 1, 2, 1)),
                  UsageError);
  CHECK_THROWS_AS(bayes_risk(hp, risk_options(EstimatorId::truth, {5}, 10, 3, 1)),
                  UsageError);
  CHECK_THROWS_AS(
      bayes_risk(hp, risk_options(EstimatorId::truth, {5}, 10, 2, 1, {0.7, 0.3})),
      UsageError);

  CompareOptions compare;
  compare.estimators = {EstimatorId::truth};
  compare.n = 5;
  compare.replications = 10;
  compare.seed = Seed{1};
  CHECK_THROWS_AS(compare_estimators(hp, compare), UsageError);

  ConsistencyOptions consistency;
  consistency.estimator = EstimatorId::bayes_closed;
  consistency.n_schedule = {5, 10};
  consistency.replications = 4;
  consistency.x1_eval = {};
  consistency.seed = Seed{1};
  CHECK_THROWS_AS(consistency_paths(hp, consistency), UsageError);
  consistency.x1_eval = {9.0};  // outside {0,1}
  CHECK_THROWS_AS(consistency_paths(Example2{}, consistency), DomainError);
}

TEST_CASE("the truth oracle has exactly zero risk") {
  for (const HyperParams hp :
       {HyperParams{Example1{1.0}}, HyperParams{Example2{}},
        HyperParams{Example3{}}}) {
    const TrimBand trim = std::holds_alternative<Example1>(hp)
                              ? TrimBand{0.05, 1.0}
                              : TrimBand{};
    const RiskCurve curve = bayes_risk(
        hp, risk_options(EstimatorId::truth, {2, 7}, 20, 2, 99, trim));
    for (const RiskRow& row : curve.rows) {
      CHECK(row.estimate == 0.0);
      CHECK(row.mc_se == 0.0);
    }
  }
}

TEST_CASE("reports are bitwise identical for any worker count") {
  const HyperParams hp = Example3{};
  const auto options =
      risk_options(EstimatorId::bayes_closed, {5, 20}, 64, 2, 12345);

  RiskCurve serial, parallel, parallel_again;
  {
    ThreadCapGuard guard("1");
    serial = bayes_risk(hp, options);
  }
  {
    ThreadCapGuard guard("8");
    parallel = bayes_risk(hp, options);
    parallel_again = bayes_risk(hp, options);
  }
  CHECK(identical(serial, parallel));
  CHECK(identical(parallel, parallel_again));

  ConsistencyOptions consistency;
  consistency.estimator = EstimatorId::bayes_closed;
  consistency.n_schedule = {5, 20};
  consistency.replications = 32;
  consistency.x1_eval = {0.0, 1.0};
  consistency.seed = Seed{777};
  PathReport a, b;
  {
    ThreadCapGuard guard("1");
    a = consistency_paths(Example2{}, consistency);
  }
  {
    ThreadCapGuard guard("8");
    b = consistency_paths(Example2{}, consistency);
  }
  REQUIRE(a.deviations.size() == b.deviations.size());
  for (std::size_t i = 0; i < a.deviations.size(); ++i) {
    CHECK(a.deviations[i].abs_deviation == b.deviations[i].abs_deviation);
    CHECK(a.deviations[i].replication == b.deviations[i].replication);
  }
}

TEST_CASE("worker resolution honors the env cap") {
  {
    ThreadCapGuard guard("3");
    CHECK(resolve_worker_count(100) == 3);
    CHECK(resolve_worker_count(2) == 2);
  }
  {
    ThreadCapGuard guard("not-a-number");
    CHECK(resolve_worker_count(1) == 1);
  }
  CHECK(resolve_worker_count(0) == 1);
  CHECK(resolve_worker_count(1) == 1);
}

TEST_CASE("parallel_for propagates the first failure") {
  CHECK_THROWS_AS(parallel_for(32,
                               [](std::size_t i) {
                                 if (i == 7) throw NumericError("boom");
                               }),
                  NumericError);
}

TEST_CASE("comparing an estimator with itself gives exactly zero paired difference") {
  CompareOptions options;
  options.estimators = {EstimatorId::bayes_closed, EstimatorId::bayes_closed};
  options.n = 10;
  options.replications = 40;
  options.loss_k = 2;
  options.seed = Seed{31337};
  const CompareTable table = compare_estimators(Example3{}, options);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].paired_diff == 0.0);
  CHECK(table.rows[0].paired_se == 0.0);
  CHECK(table.rows[1].paired_diff == 0.0);
  CHECK(table.rows[1].paired_se == 0.0);
  CHECK(table.rows[0].estimate == table.rows[1].estimate);
  CHECK_FALSE(table.rows[1].beats_reference);
}

TEST_CASE("L1 risk obeys the Jensen bound against L2 risk") {
  for (const HyperParams hp : {HyperParams{Example2{}}, HyperParams{Example3{}}}) {
    const auto base = risk_options(EstimatorId::bayes_closed, {5, 40}, 200, 1, 2024);
    auto squared = base;
    squared.loss_k = 2;
    const RiskCurve l1 = bayes_risk(hp, base);
    const RiskCurve l2 = bayes_risk(hp, squared);
    REQUIRE(l1.rows.size() == l2.rows.size());
    for (std::size_t i = 0; i < l1.rows.size(); ++i) {
      CHECK(l1.rows[i].estimate <=
            std::sqrt(l2.rows[i].estimate) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("example2 risk collapses by n = 1000") {
  const RiskCurve curve = bayes_risk(
      Example2{}, risk_options(EstimatorId::bayes_closed, {1000}, 200, 2, 515));
  REQUIRE(curve.rows.size() == 1);
  CHECK(curve.rows[0].estimate < 0.01);
  CHECK(curve.rows[0].replications == 200);
  CHECK_FALSE(curve.rows[0].trimmed);
}

TEST_CASE("closed and grid estimators see the same draws and agree") {
  const auto closed = risk_options(EstimatorId::bayes_closed, {10}, 60, 2, 808);
  auto grid = closed;
  grid.estimator = EstimatorId::bayes_grid;
  grid.grid_size = 512;
  const RiskCurve closed_curve = bayes_risk(Example3{}, closed);
  const RiskCurve grid_curve = bayes_risk(Example3{}, grid);
  const double gap =
      std::fabs(closed_curve.rows[0].estimate - grid_curve.rows[0].estimate);
  CHECK(gap <= closed_curve.rows[0].mc_se + grid_curve.rows[0].mc_se + 1e-3);
}

TEST_CASE("trimming is flagged and changes the draw stream") {
  const HyperParams hp = Example1{1.0};
  const auto trimmed = risk_options(EstimatorId::bayes_closed, {10}, 50, 1, 99,
                                    TrimBand{0.05, 1.0});
  const auto untrimmed = risk_options(EstimatorId::bayes_closed, {10}, 50, 1, 99);

  const RiskCurve with_trim = bayes_risk(hp, trimmed);
  const RiskCurve without_trim = bayes_risk(hp, untrimmed);
  CHECK(with_trim.rows[0].trimmed);
  CHECK_FALSE(without_trim.rows[0].trimmed);
  CHECK(with_trim.rows[0].estimate != without_trim.rows[0].estimate);
}

TEST_CASE("no-mass fallbacks are counted and capped") {
  // A binary predictor with a single-pair sample leaves the queried cell
  // empty in roughly a third of replications: far beyond the 5% budget.
  RiskOptions options =
      risk_options(EstimatorId::nadaraya_watson, {1}, 200, 2, 4242);
  CHECK_THROWS_AS(bayes_risk(Example2{}, options), ExperimentError);

  // With ten pairs the empty-cell probability drops to ~1.5%, which the
  // budget tolerates; the report still counts the events.
  options.n_schedule = {10};
  const RiskCurve curve = bayes_risk(Example2{}, options);
  CHECK(curve.evaluations == 200);
  CHECK(curve.fallbacks > 0);
  CHECK(static_cast<double>(curve.fallbacks) <= 0.05 * 200.0);
}

TEST_CASE("the printed example2 formula pays a measurable risk premium") {
  CompareOptions options;
  options.estimators = {EstimatorId::bayes_closed, EstimatorId::bayes_closed_paper};
  options.n = 5;
  options.replications = 1000;
  options.loss_k = 2;
  options.seed = Seed{616};
  const CompareTable table = compare_estimators(Example2{}, options);
  const CompareRow& paper = table.rows[1];
  CHECK(paper.paired_diff > 2.0 * paper.paired_se);
  CHECK_FALSE(paper.beats_reference);
}

TEST_CASE("consistency report layout and summaries") {
  ConsistencyOptions options;
  options.estimator = EstimatorId::bayes_closed;
  options.n_schedule = {5, 50};
  options.replications = 8;
  options.x1_eval = {0.0, 1.0};
  options.seed = Seed{2};
  const PathReport report = consistency_paths(Example2{}, options);

  CHECK(report.theta_draws.size() == 8);
  REQUIRE(report.deviations.size() == 8 * 2 * 2);
  // replication-major, then schedule, then evaluation point
  CHECK(report.deviations[0].replication == 0);
  CHECK(report.deviations[0].n == 5);
  CHECK(report.deviations[0].x1 == 0.0);
  CHECK(report.deviations[1].x1 == 1.0);
  CHECK(report.deviations[2].n == 50);
  CHECK(report.deviations[4].replication == 1);

  REQUIRE(report.summaries.size() == 2);
  CHECK(report.summaries[0].n == 5);
  CHECK(report.summaries[1].n == 50);
  for (const PathSummary& s : report.summaries) {
    CHECK(s.median_max_dev >= 0.0);
    CHECK(s.p90_max_dev >= s.median_max_dev);
  }
  REQUIRE(report.point_summaries.size() == 4);
  CHECK(report.point_summaries[0].n == 5);
  CHECK(report.point_summaries[0].x1 == 0.0);

  // single-entry schedule degenerates to a one-shot table
  options.n_schedule = {7};
  const PathReport single = consistency_paths(Example2{}, options);
  CHECK(single.summaries.size() == 1);
  CHECK(single.deviations.size() == 8 * 2);
}
