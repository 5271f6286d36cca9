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

#ifndef BAYESREG_POSTERIOR_GRID_HPP
#define BAYESREG_POSTERIOR_GRID_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bayesreg/model.hpp"
#include "bayesreg/types.hpp"

namespace bayesreg {

/// Discrete quadrature representation of the posterior over theta.
/// Nodes sit at prior quantiles (j - 0.5)/J, so each node carries equal
/// prior mass and unbounded parameter spaces need no manual truncation.
/// Posterior masses are then proportional to the likelihood at the
/// nodes. Immutable once built; safe to share across threads.
struct PosteriorGrid {
  std::vector<double> nodes;        // theta_j, strictly increasing
  std::vector<double> log_weights;  // unnormalized log posterior masses
  std::vector<double> weights;      // normalized, sum to 1 within 1e-12
  std::size_t n_obs = 0;

  std::size_t size() const { return nodes.size(); }
};

inline constexpr std::size_t kOracleGridSize = 4096;  // oracle duty
inline constexpr std::size_t kMonteCarloGridSize = 512;  // inside MC loops

/// Builds the quadrature posterior for the given data. With empty data
/// this is the discretized prior (all weights 1/J). Throws
/// DegeneratePosteriorError when the data are impossible at every node,
/// DomainError when a data pair is out of support.
PosteriorGrid build_grid(const ModelSpec& model, const PriorSpec& prior,
                         const Dataset& data, std::size_t grid_size);

/// The posterior-predictive regression curve at x1 — the Bayes
/// estimator m*_n(x', x1):
///
///   sum_j w_j r_{theta_j}(x1) f1(theta_j, x1) / sum_j w_j f1(theta_j, x1)
///
/// with f1 = exp(log_x1_marginal). Both sums run in log space (the
/// numerator with sign-tracked accumulation, since r may be negative).
/// Note this is not the plain posterior mean of r_theta(x1) unless f1
/// is theta-free. Throws NoPredictiveMassError when the denominator
/// underflows at every node.
double predictive_regression(const PosteriorGrid& grid, const ModelSpec& model,
                             double x1);

/// Posterior-predictive mean of a statistic whose per-theta mean is
/// given: sum_j w_j g(theta_j). Non-finite g values raise NumericError.
double predictive_statistic_mean(const PosteriorGrid& grid,
                                 const std::function<double(Theta)>& statistic_mean_under_theta);

/// predictive_regression at every requested x1. Per-point evaluation
/// failures are collected and reported together with their positions.
std::vector<double> curve_estimate(const PosteriorGrid& grid,
                                   const ModelSpec& model,
                                   std::span<const double> x1_grid);

}  // namespace bayesreg

#endif  // BAYESREG_POSTERIOR_GRID_HPP
