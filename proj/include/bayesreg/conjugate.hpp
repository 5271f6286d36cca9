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

#ifndef BAYESREG_CONJUGATE_HPP
#define BAYESREG_CONJUGATE_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>

#include "bayesreg/model.hpp"
#include "bayesreg/numeric.hpp"
#include "bayesreg/types.hpp"

namespace bayesreg {

// The three bundled conjugate families:
//   example1  exponential chain:  X1 ~ Exp(theta), X2 | X1=x1 ~ Exp(theta*x1),
//             prior Exp(lambda); regression 1/(theta*x1).
//   example2  dependent coin pair: X1 ~ Bernoulli(theta), X2 | X1=k1 ~
//             Bernoulli(theta) if k1=1 else Bernoulli(1-theta), uniform
//             prior; regression theta^{k1}(1-theta)^{1-k1}.
//   example3  bivariate normal with mean (theta, theta), covariance
//             sigma^2 [[1, rho], [rho, 1]], prior N(mu, tau^2);
//             regression (1-rho)*theta + rho*x1.

struct Example1 {
  double lambda = 1.0;  // prior rate, > 0
};

struct Example2 {};

struct Example3 {
  double mu = 0.0;
  double tau = 1.0;    // prior sd, > 0
  double sigma = 1.0;  // observation sd, > 0
  double rho = 0.5;    // correlation, in (-1, 1)
};

using HyperParams = std::variant<Example1, Example2, Example3>;

/// Throws DomainError if a hyperparameter is out of range.
void validate(const HyperParams& params);

/// "example1" / "example2" / "example3".
std::string model_name(const HyperParams& params);

/// Parses a model name back into default-hyperparameter params.
HyperParams params_for_model(const std::string& name);

std::unique_ptr<ModelSpec> make_model(const HyperParams& params);
std::unique_ptr<PriorSpec> make_prior(const HyperParams& params);

// Streaming sufficient statistics. Real accumulators are compensated so
// that folding pairs one at a time matches a from-scratch pass to
// ~1e-15 relative even at n = 1e4.

struct Ex1Stats {
  std::size_t n = 0;
  KahanSum s;  // sum_i x1_i * (1 + x2_i)
};

struct Ex2Stats {
  std::size_t n = 0;
  // n_{j1 j2} = #{i : (k1_i, k2_i) = (j1, j2)}
  std::uint64_t n00 = 0;
  std::uint64_t n01 = 0;
  std::uint64_t n10 = 0;
  std::uint64_t n11 = 0;

  std::uint64_t n_plus0() const { return n00 + n10; }  // responses equal to 0
  std::uint64_t n_plus1() const { return n01 + n11; }
};

struct Ex3Stats {
  std::size_t n = 0;
  KahanSum s1;  // sum_i (x1_i + x2_i)
};

using SufficientStats = std::variant<Ex1Stats, Ex2Stats, Ex3Stats>;

SufficientStats empty_stats(const HyperParams& params);

/// Folds one observation in O(1). The stats variant must match the
/// hyperparameter variant.
SufficientStats update_stats(const HyperParams& params,
                             const SufficientStats& stats,
                             const ObsPair& pair);

SufficientStats stats_from_dataset(const HyperParams& params,
                                   const Dataset& data);

/// Which closed form to evaluate. `posterior` is the form derived from
/// the defining posterior-predictive integral and is the default;
/// `paper` is the printed worked-example formula, kept so the
/// documented discrepancies (examples 2 and 3) stay reproducible.
enum class ClosedFormVariant { posterior, paper };

/// The closed-form Bayes estimate m*_n(x', x1) of the regression curve,
/// computed from sufficient statistics.
double closed_form_regression(const HyperParams& params,
                              const SufficientStats& stats, double x1,
                              ClosedFormVariant variant = ClosedFormVariant::posterior);

namespace ex2 {

/// Beta posterior exponents under the uniform prior:
/// theta | k' ~ Beta(alpha, beta).
double alpha(const Ex2Stats& stats);  // n_{+0} + 2 n11 + 1
double beta(const Ex2Stats& stats);   // n_{+0} + 2 n01 + 1

}  // namespace ex2

namespace ex3 {

// Pure helpers behind the example-3 closed forms, split out so an
// oracle mismatch can be localized.

/// a_n = 2(n+1)(1+rho) + sigma^2/tau^2 (printed form).
double a_n(std::size_t n, const Example3& p);

/// Printed rho_1 = -rho * (a_n + g)/(a_n - g), g = (1-rho)/(1+rho).
double rho1_paper(std::size_t n, const Example3& p);

/// Printed m_1 = (s1 + (1+rho)(sigma^2/tau^2) mu) /
///               (2 (1-rho_1) (1+rho)^2 sigma^2 a_n).
double m1_paper(std::size_t n, double s1, const Example3& p);

/// Posterior over theta is normal; each pair carries precision
/// 2 / (sigma^2 (1+rho)).
double posterior_variance(std::size_t n, const Example3& p);
double posterior_mean(std::size_t n, double s1, const Example3& p);

/// Slope of the predictive regression line:
/// (rho sigma^2 + v_n) / (sigma^2 + v_n).
double predictive_slope(std::size_t n, const Example3& p);

}  // namespace ex3

}  // namespace bayesreg

#endif  // BAYESREG_CONJUGATE_HPP
