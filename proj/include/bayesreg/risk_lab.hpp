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

#ifndef BAYESREG_RISK_LAB_HPP
#define BAYESREG_RISK_LAB_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bayesreg/conjugate.hpp"
#include "bayesreg/posterior_grid.hpp"
#include "bayesreg/types.hpp"

namespace bayesreg {

// Monte Carlo laboratory. Per replication r it draws, from the stream
// seeded with derive_seed(master, tag, r):
//   theta ~ prior, then x1 ~ X1-marginal (rejecting outside the trim
//   quantile band when one is active), then one growing observation
//   path whose prefixes serve every n in the schedule.
// Replications run in parallel (worker count capped by the
// BAYES_REGRESS_THREADS env var) but are aggregated in replication
// order, so reports are identical for any worker count.

enum class EstimatorId {
  truth,         // oracle: r_theta itself, zero loss by construction
  bayes_closed,  // closed form, posterior variant
  bayes_closed_paper,
  bayes_grid,    // quadrature posterior-predictive regression
  nadaraya_watson,
};

/// Accepts canonical names plus the variant spellings
/// "bayes-closed(beta-posterior)" and "bayes-closed(paper)".
EstimatorId parse_estimator_id(const std::string& name);
std::string to_string(EstimatorId id);

/// Quantile band of the X1 marginal used to reject evaluation points;
/// (0, 1) means no trimming.
struct TrimBand {
  double lo = 0.0;
  double hi = 1.0;

  bool active() const { return lo > 0.0 || hi < 1.0; }
};

struct RiskRow {
  std::size_t n = 0;
  int loss_k = 2;
  EstimatorId estimator = EstimatorId::bayes_closed;
  double estimate = 0.0;
  double mc_se = 0.0;
  std::size_t replications = 0;
  bool trimmed = false;
};

/// Monte Carlo Bayes-risk estimates per sample size.
struct RiskCurve {
  std::vector<RiskRow> rows;
  std::size_t fallbacks = 0;    // evaluations replaced by the response mean
  std::size_t evaluations = 0;  // total estimator evaluations
};

struct RiskOptions {
  EstimatorId estimator = EstimatorId::bayes_closed;
  std::vector<std::size_t> n_schedule;
  std::size_t replications = 0;
  int loss_k = 2;
  TrimBand trim;
  Seed seed;
  std::size_t grid_size = kMonteCarloGridSize;
  std::optional<double> nw_bandwidth;  // nullopt = harness default
};

/// Estimates the Bayes risk E[|m(x', x1) - r_theta(x1)|^k] for every n
/// in the schedule. Throws ExperimentError when more than 5% of the
/// estimator evaluations needed the fallback.
RiskCurve bayes_risk(const HyperParams& params, const RiskOptions& options);

struct PathDeviation {
  std::size_t replication = 0;
  std::size_t n = 0;
  double x1 = 0.0;
  double abs_deviation = 0.0;
};

struct PathSummary {
  std::size_t n = 0;
  double median_max_dev = 0.0;
  double p90_max_dev = 0.0;
};

struct PathPointSummary {
  std::size_t n = 0;
  double x1 = 0.0;
  double median_dev = 0.0;
};

/// Deviations |m*_n(x1) - r_theta(x1)| along growing sample paths, one
/// path per replication, plus cross-replication quantiles.
struct PathReport {
  std::vector<double> theta_draws;           // one per replication
  std::vector<PathDeviation> deviations;     // replication-major order
  std::vector<std::vector<double>> max_dev;  // [schedule index][replication]
  std::vector<PathSummary> summaries;        // per schedule entry
  std::vector<PathPointSummary> point_summaries;
  std::size_t fallbacks = 0;
  std::size_t evaluations = 0;
};

struct ConsistencyOptions {
  EstimatorId estimator = EstimatorId::bayes_closed;
  std::vector<std::size_t> n_schedule;  // strictly increasing
  std::size_t replications = 0;
  std::vector<double> x1_eval;
  Seed seed;
  std::size_t grid_size = kMonteCarloGridSize;
  std::optional<double> nw_bandwidth;
};

PathReport consistency_paths(const HyperParams& params,
                             const ConsistencyOptions& options);

struct CompareRow {
  EstimatorId estimator = EstimatorId::bayes_closed;
  double estimate = 0.0;
  double mc_se = 0.0;
  double paired_diff = 0.0;  // mean(loss - loss of first estimator)
  double paired_se = 0.0;
  bool beats_reference = false;  // paired_diff < -2 * paired_se
};

struct CompareTable {
  std::size_t n = 0;
  int loss_k = 2;
  std::size_t replications = 0;
  bool trimmed = false;
  std::vector<CompareRow> rows;  // in the order the estimators were given
  std::size_t fallbacks = 0;
  std::size_t evaluations = 0;
};

struct CompareOptions {
  std::vector<EstimatorId> estimators;  // >= 2; first is the reference
  std::size_t n = 0;
  std::size_t replications = 0;
  int loss_k = 2;
  TrimBand trim;
  Seed seed;
  std::size_t grid_size = kMonteCarloGridSize;
  std::optional<double> nw_bandwidth;
};

/// Risk comparison with common random numbers: every estimator sees the
/// same (theta, x', x1) draws, and paired differences are reported
/// against the first estimator.
CompareTable compare_estimators(const HyperParams& params,
                                const CompareOptions& options);

/// Worker count for a parallel region: min(task count, hardware
/// concurrency), capped by BAYES_REGRESS_THREADS when set. Results
/// never depend on it.
unsigned resolve_worker_count(std::size_t task_count);

/// Runs body(0..count-1) on the resolved number of workers. Bodies must
/// write only to index-addressed storage.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Order statistic with linear interpolation, q in [0, 1].
double sample_quantile(std::vector<double> values, double q);

}  // namespace bayesreg

#endif  // BAYESREG_RISK_LAB_HPP
