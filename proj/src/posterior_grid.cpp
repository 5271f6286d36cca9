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

#include "bayesreg/posterior_grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bayesreg/errors.hpp"
#include "bayesreg/numeric.hpp"

namespace bayesreg {

PosteriorGrid build_grid(const ModelSpec& model, const PriorSpec& prior,
                         const Dataset& data, std::size_t grid_size) {
  if (grid_size < 2) {
    throw UsageError("build_grid: grid_size must be at least 2, got " +
                     std::to_string(grid_size));
  }
  for (const ObsPair& pair : data.pairs) model.require_pair(pair);

  PosteriorGrid grid;
  grid.n_obs = data.n();
  grid.nodes.resize(grid_size);
  grid.log_weights.assign(grid_size, 0.0);
  grid.weights.resize(grid_size);

  const double j_count = static_cast<double>(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    grid.nodes[j] = prior.quantile((static_cast<double>(j) + 0.5) / j_count).value;
    if (j > 0 && !(grid.nodes[j] > grid.nodes[j - 1])) {
      throw NumericError("build_grid: prior quantile nodes are not strictly increasing near node " +
                         std::to_string(j));
    }
  }

  // Equal-prior-mass nodes absorb the prior density, so the posterior
  // log-mass of node j is just the log-likelihood of the sample there.
  for (std::size_t j = 0; j < grid_size; ++j) {
    const Theta theta{grid.nodes[j]};
    double acc = 0.0;
    for (const ObsPair& pair : data.pairs) acc += model.log_joint(theta, pair);
    if (std::isnan(acc)) {
      throw NumericError("build_grid: log-likelihood is NaN at theta = " +
                         std::to_string(grid.nodes[j]));
    }
    grid.log_weights[j] = acc;
  }

  const double lse = log_sum_exp(grid.log_weights);
  if (lse == kNegInf) {
    const auto [lo, hi] =
        std::minmax_element(grid.log_weights.begin(), grid.log_weights.end());
    std::ostringstream msg;
    msg << "build_grid: posterior degenerate, every node underflowed "
        << "(log-likelihood range [" << *lo << ", " << *hi << "])";
    throw DegeneratePosteriorError(msg.str());
  }

  KahanSum total;
  for (std::size_t j = 0; j < grid_size; ++j) {
    grid.weights[j] = std::exp(grid.log_weights[j] - lse);
    total.add(grid.weights[j]);
  }
  for (double& w : grid.weights) w /= total.value();
  return grid;
}

double predictive_regression(const PosteriorGrid& grid, const ModelSpec& model,
                             double x1) {
  if (grid.size() == 0) throw UsageError("predictive_regression: empty grid");
  model.require_x1(x1);

  // Denominator sum_j w_j f1(theta_j, x1) in log space; numerator adds
  // the (possibly signed) regression values via a shared max-log shift.
  std::vector<double> log_den(grid.size(), kNegInf);
  std::vector<double> reg(grid.size());
  double max_num = kNegInf;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Theta theta{grid.nodes[j]};
    const double lw = std::log(grid.weights[j]);
    if (lw == kNegInf) continue;
    log_den[j] = lw + model.log_x1_marginal(theta, x1);
    reg[j] = model.regression(theta, x1);
    if (reg[j] != 0.0 && log_den[j] != kNegInf) {
      max_num = std::max(max_num, log_den[j] + std::log(std::fabs(reg[j])));
    }
  }

  const double lse_den = log_sum_exp(log_den);
  if (lse_den == kNegInf) {
    throw NoPredictiveMassError(
        "predictive_regression: the predictive density of x1 = " +
        std::to_string(x1) + " underflowed at every node");
  }
  if (max_num == kNegInf) return 0.0;  // regression vanishes at all live nodes

  KahanSum positive, negative;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (reg[j] == 0.0 || log_den[j] == kNegInf) continue;
    const double term =
        std::exp(log_den[j] + std::log(std::fabs(reg[j])) - max_num);
    (reg[j] > 0.0 ? positive : negative).add(term);
  }
  const double value =
      (positive.value() - negative.value()) * std::exp(max_num - lse_den);
  if (!std::isfinite(value)) {
    throw NumericError("predictive_regression: non-finite value at x1 = " +
                       std::to_string(x1));
  }
  return value;
}

double predictive_statistic_mean(
    const PosteriorGrid& grid,
    const std::function<double(Theta)>& statistic_mean_under_theta) {
  if (grid.size() == 0) throw UsageError("predictive_statistic_mean: empty grid");
  KahanSum acc;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double g = statistic_mean_under_theta(Theta{grid.nodes[j]});
    if (!std::isfinite(g)) {
      throw NumericError("predictive_statistic_mean: statistic is non-finite at theta = " +
                         std::to_string(grid.nodes[j]));
    }
    acc.add(grid.weights[j] * g);
  }
  return acc.value();
}

std::vector<double> curve_estimate(const PosteriorGrid& grid,
                                   const ModelSpec& model,
                                   std::span<const double> x1_grid) {
  for (const double x1 : x1_grid) model.require_x1(x1);

  std::vector<double> values;
  values.reserve(x1_grid.size());
  std::ostringstream failures;
  std::size_t failure_count = 0;
  for (const double x1 : x1_grid) {
    try {
      values.push_back(predictive_regression(grid, model, x1));
    } catch (const NumericError& e) {
      failures << (failure_count ? "; " : "") << "x1 = " << x1 << ": " << e.what();
      ++failure_count;
      values.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  if (failure_count > 0) {
    throw NoPredictiveMassError("curve_estimate: " + std::to_string(failure_count) +
                                " point(s) failed [" + failures.str() + "]");
  }
  return values;
}

}  // namespace bayesreg
