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

#include "bayesreg/conjugate.hpp"

#include <cmath>
#include <sstream>

#include "bayesreg/errors.hpp"

namespace bayesreg {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

bool is_binary(double v) { return v == 0.0 || v == 1.0; }

// --- example 1: exponential chain -----------------------------------------
// Joint density theta^2 x1 exp(-theta x1 (1 + x2)) on (0, inf)^2; both the
// X1 marginal Exp(theta) and the conditional Exp(theta x1) are G(1, .) in
// the shape-scale gamma convention.

class ExponentialChainModel final : public ModelSpec {
 public:
  std::string name() const override { return "example1"; }

  double log_joint(Theta theta, const ObsPair& pair) const override {
    const double t = theta.value;
    return 2.0 * std::log(t) + std::log(pair.x1) - t * pair.x1 * (1.0 + pair.x2);
  }

  double log_x1_marginal(Theta theta, double x1) const override {
    return std::log(theta.value) - theta.value * x1;
  }

  double regression(Theta theta, double x1) const override {
    return 1.0 / (theta.value * x1);
  }

  ObsPair sample_pair(Theta theta, Rng& rng) const override {
    const double x1 = rng.exponential(theta.value);
    const double x2 = rng.exponential(theta.value * x1);
    return {x1, x2};
  }

  double x1_quantile(Theta theta, double u) const override {
    return -std::log1p(-u) / theta.value;
  }

  const Support& parameter_support() const override { return positive_; }
  const Support& predictor_support() const override { return positive_; }
  const Support& response_support() const override { return positive_; }

 private:
  Support positive_ = Support::positive();
};

// --- example 2: dependent coin pair ----------------------------------------
// X1 ~ Bernoulli(theta); the second toss reuses the coin on heads and a
// 1-theta coin on tails, so X2 | X1=k1 ~ Bernoulli(k1 + (1-2k1)(1-theta)).

class CoinPairModel final : public ModelSpec {
 public:
  std::string name() const override { return "example2"; }

  double log_joint(Theta theta, const ObsPair& pair) const override {
    const double t = theta.value;
    if (pair.x2 == 0.0) return std::log(t) + std::log1p(-t);
    if (pair.x1 == 0.0) return 2.0 * std::log1p(-t);
    return 2.0 * std::log(t);
  }

  double log_x1_marginal(Theta theta, double x1) const override {
    return x1 == 1.0 ? std::log(theta.value) : std::log1p(-theta.value);
  }

  double regression(Theta theta, double x1) const override {
    return x1 == 1.0 ? theta.value : 1.0 - theta.value;
  }

  ObsPair sample_pair(Theta theta, Rng& rng) const override {
    const double x1 = x1_quantile(theta, rng.uniform01());
    const double heads = x1 == 1.0 ? theta.value : 1.0 - theta.value;
    const double x2 = rng.bernoulli(heads) ? 1.0 : 0.0;
    return {x1, x2};
  }

  double x1_quantile(Theta theta, double u) const override {
    return u <= 1.0 - theta.value ? 0.0 : 1.0;
  }

  const Support& parameter_support() const override { return open_unit_; }
  const Support& predictor_support() const override { return binary_; }
  const Support& response_support() const override { return binary_; }

 private:
  Support open_unit_ = Support::open_unit();
  Support binary_ = Support::binary();
};

// --- example 3: bivariate normal -------------------------------------------

class BivariateNormalModel final : public ModelSpec {
 public:
  BivariateNormalModel(double sigma, double rho) : sigma_(sigma), rho_(rho) {}

  std::string name() const override { return "example3"; }

  double log_joint(Theta theta, const ObsPair& pair) const override {
    const double z1 = (pair.x1 - theta.value) / sigma_;
    const double z2 = (pair.x2 - theta.value) / sigma_;
    const double one_minus_r2 = (1.0 - rho_) * (1.0 + rho_);
    const double quad = (z1 * z1 - 2.0 * rho_ * z1 * z2 + z2 * z2) / one_minus_r2;
    return -kLog2Pi - 2.0 * std::log(sigma_) - 0.5 * std::log(one_minus_r2) -
           0.5 * quad;
  }

  double log_x1_marginal(Theta theta, double x1) const override {
    const double z = (x1 - theta.value) / sigma_;
    return -0.5 * kLog2Pi - std::log(sigma_) - 0.5 * z * z;
  }

  double regression(Theta theta, double x1) const override {
    return (1.0 - rho_) * theta.value + rho_ * x1;
  }

  ObsPair sample_pair(Theta theta, Rng& rng) const override {
    const double x1 = x1_quantile(theta, rng.uniform01());
    const double conditional_mean = theta.value + rho_ * (x1 - theta.value);
    const double conditional_sd = sigma_ * std::sqrt((1.0 - rho_) * (1.0 + rho_));
    const double x2 = rng.normal(conditional_mean, conditional_sd);
    return {x1, x2};
  }

  double x1_quantile(Theta theta, double u) const override {
    return theta.value + sigma_ * inverse_normal_cdf(u);
  }

  const Support& parameter_support() const override { return real_line_; }
  const Support& predictor_support() const override { return real_line_; }
  const Support& response_support() const override { return real_line_; }

 private:
  double sigma_;
  double rho_;
  Support real_line_ = Support::real_line();
};

// --- priors -----------------------------------------------------------------

class ExponentialPrior final : public PriorSpec {
 public:
  explicit ExponentialPrior(double rate) : rate_(rate) {}

  std::string name() const override { return "exponential"; }

  double log_density(Theta theta) const override {
    if (!(theta.value > 0.0)) {
      throw DomainError("exponential prior: theta must be positive, got " +
                        std::to_string(theta.value));
    }
    return std::log(rate_) - rate_ * theta.value;
  }

  Theta quantile(double u) const override {
    require_unit(u);
    return Theta{-std::log1p(-u) / rate_};
  }

 private:
  static void require_unit(double u) {
    if (!(u > 0.0 && u < 1.0)) {
      throw DomainError("prior quantile: u must lie strictly inside (0, 1), got " +
                        std::to_string(u));
    }
  }
  double rate_;
};

class UniformUnitPrior final : public PriorSpec {
 public:
  std::string name() const override { return "uniform(0,1)"; }

  double log_density(Theta theta) const override {
    if (!(theta.value > 0.0 && theta.value < 1.0)) {
      throw DomainError("uniform prior: theta must lie inside (0, 1), got " +
                        std::to_string(theta.value));
    }
    return 0.0;
  }

  Theta quantile(double u) const override {
    if (!(u > 0.0 && u < 1.0)) {
      throw DomainError("prior quantile: u must lie strictly inside (0, 1), got " +
                        std::to_string(u));
    }
    return Theta{u};
  }
};

class NormalPrior final : public PriorSpec {
 public:
  NormalPrior(double mu, double tau) : mu_(mu), tau_(tau) {}

  std::string name() const override { return "normal"; }

  double log_density(Theta theta) const override {
    const double z = (theta.value - mu_) / tau_;
    return -0.5 * kLog2Pi - std::log(tau_) - 0.5 * z * z;
  }

  Theta quantile(double u) const override {
    return Theta{mu_ + tau_ * inverse_normal_cdf(u)};
  }

 private:
  double mu_;
  double tau_;
};

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

}  // namespace

void validate(const HyperParams& params) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Example1>) {
          require_finite(p.lambda, "lambda");
          if (!(p.lambda > 0.0)) {
            throw DomainError("lambda must be positive, got " +
                              std::to_string(p.lambda));
          }
        } else if constexpr (std::is_same_v<T, Example3>) {
          require_finite(p.mu, "mu");
          require_finite(p.tau, "tau");
          require_finite(p.sigma, "sigma");
          require_finite(p.rho, "rho");
          if (!(p.tau > 0.0)) {
            throw DomainError("tau must be positive, got " + std::to_string(p.tau));
          }
          if (!(p.sigma > 0.0)) {
            throw DomainError("sigma must be positive, got " +
                              std::to_string(p.sigma));
          }
          if (!(p.rho > -1.0 && p.rho < 1.0)) {
            throw DomainError("rho must lie inside (-1, 1), got " +
                              std::to_string(p.rho));
          }
        }
      },
      params);
}

std::string model_name(const HyperParams& params) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Example1>) return "example1";
        if constexpr (std::is_same_v<T, Example2>) return "example2";
        if constexpr (std::is_same_v<T, Example3>) return "example3";
      },
      params);
}

HyperParams params_for_model(const std::string& name) {
  if (name == "example1") return Example1{};
  if (name == "example2") return Example2{};
  if (name == "example3") return Example3{};
  throw UsageError("unknown model '" + name +
                   "' (expected example1, example2 or example3)");
}

std::unique_ptr<ModelSpec> make_model(const HyperParams& params) {
  validate(params);
  return std::visit(
      [](const auto& p) -> std::unique_ptr<ModelSpec> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Example1>) {
          return std::make_unique<ExponentialChainModel>();
        } else if constexpr (std::is_same_v<T, Example2>) {
          return std::make_unique<CoinPairModel>();
        } else {
          return std::make_unique<BivariateNormalModel>(p.sigma, p.rho);
        }
      },
      params);
}

std::unique_ptr<PriorSpec> make_prior(const HyperParams& params) {
  validate(params);
  return std::visit(
      [](const auto& p) -> std::unique_ptr<PriorSpec> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Example1>) {
          return std::make_unique<ExponentialPrior>(p.lambda);
        } else if constexpr (std::is_same_v<T, Example2>) {
          return std::make_unique<UniformUnitPrior>();
        } else {
          return std::make_unique<NormalPrior>(p.mu, p.tau);
        }
      },
      params);
}

SufficientStats empty_stats(const HyperParams& params) {
  return std::visit(
      [](const auto& p) -> SufficientStats {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Example1>) return Ex1Stats{};
        if constexpr (std::is_same_v<T, Example2>) return Ex2Stats{};
        if constexpr (std::is_same_v<T, Example3>) return Ex3Stats{};
      },
      params);
}

namespace {

[[noreturn]] void variant_mismatch(const HyperParams& params) {
  throw UsageError("update_stats: statistics variant does not match model " +
                   model_name(params));
}

}  // namespace

SufficientStats update_stats(const HyperParams& params,
                             const SufficientStats& stats,
                             const ObsPair& pair) {
  if (params.index() != stats.index()) variant_mismatch(params);

  if (const auto* s1 = std::get_if<Ex1Stats>(&stats)) {
    if (!(pair.x1 > 0.0) || !(pair.x2 > 0.0) || !std::isfinite(pair.x1) ||
        !std::isfinite(pair.x2)) {
      std::ostringstream msg;
      msg << "example1 observation (" << pair.x1 << ", " << pair.x2
          << ") outside (0, inf)^2";
      throw DomainError(msg.str());
    }
    Ex1Stats next = *s1;
    next.n += 1;
    next.s.add(pair.x1 * (1.0 + pair.x2));
    return next;
  }

  if (const auto* s2 = std::get_if<Ex2Stats>(&stats)) {
    if (!is_binary(pair.x1) || !is_binary(pair.x2)) {
      std::ostringstream msg;
      msg << "example2 observation (" << pair.x1 << ", " << pair.x2
          << ") is not a {0,1} pair";
      throw DomainError(msg.str());
    }
    Ex2Stats next = *s2;
    next.n += 1;
    if (pair.x1 == 0.0) {
      (pair.x2 == 0.0 ? next.n00 : next.n01) += 1;
    } else {
      (pair.x2 == 0.0 ? next.n10 : next.n11) += 1;
    }
    return next;
  }

  const auto& s3 = std::get<Ex3Stats>(stats);
  if (!std::isfinite(pair.x1) || !std::isfinite(pair.x2)) {
    throw DomainError("example3 observation must be finite");
  }
  Ex3Stats next = s3;
  next.n += 1;
  next.s1.add(pair.x1 + pair.x2);
  return next;
}

SufficientStats stats_from_dataset(const HyperParams& params,
                                   const Dataset& data) {
  SufficientStats stats = empty_stats(params);
  for (const ObsPair& pair : data.pairs) {
    stats = update_stats(params, stats, pair);
  }
  return stats;
}

namespace ex2 {

double alpha(const Ex2Stats& stats) {
  return static_cast<double>(stats.n_plus0() + 2 * stats.n11 + 1);
}

double beta(const Ex2Stats& stats) {
  return static_cast<double>(stats.n_plus0() + 2 * stats.n01 + 1);
}

}  // namespace ex2

namespace ex3 {

double a_n(std::size_t n, const Example3& p) {
  const double ratio = (p.sigma * p.sigma) / (p.tau * p.tau);
  return 2.0 * (static_cast<double>(n) + 1.0) * (1.0 + p.rho) + ratio;
}

double rho1_paper(std::size_t n, const Example3& p) {
  const double a = a_n(n, p);
  const double g = (1.0 - p.rho) / (1.0 + p.rho);
  return -p.rho * (a + g) / (a - g);
}

double m1_paper(std::size_t n, double s1, const Example3& p) {
  const double a = a_n(n, p);
  const double rho1 = rho1_paper(n, p);
  const double ratio = (p.sigma * p.sigma) / (p.tau * p.tau);
  const double one_plus = 1.0 + p.rho;
  return (s1 + one_plus * ratio * p.mu) /
         (2.0 * (1.0 - rho1) * one_plus * one_plus * p.sigma * p.sigma * a);
}

double posterior_variance(std::size_t n, const Example3& p) {
  const double pair_precision = 2.0 / (p.sigma * p.sigma * (1.0 + p.rho));
  return 1.0 / (1.0 / (p.tau * p.tau) + static_cast<double>(n) * pair_precision);
}

double posterior_mean(std::size_t n, double s1, const Example3& p) {
  const double v = posterior_variance(n, p);
  return v * (p.mu / (p.tau * p.tau) + s1 / (p.sigma * p.sigma * (1.0 + p.rho)));
}

double predictive_slope(std::size_t n, const Example3& p) {
  const double v = posterior_variance(n, p);
  const double s2 = p.sigma * p.sigma;
  return (p.rho * s2 + v) / (s2 + v);
}

}  // namespace ex3

double closed_form_regression(const HyperParams& params,
                              const SufficientStats& stats, double x1,
                              ClosedFormVariant variant) {
  if (params.index() != stats.index()) variant_mismatch(params);

  if (const auto* p1 = std::get_if<Example1>(&params)) {
    if (!(x1 > 0.0) || !std::isfinite(x1)) {
      throw DomainError("example1 estimator needs x1 > 0 (pole at 0), got " +
                        std::to_string(x1));
    }
    const auto& s = std::get<Ex1Stats>(stats);
    const double n = static_cast<double>(s.n);
    // Both variants: the printed formula agrees with the posterior
    // Gamma(2n+1, lambda + sum) predictive integral.
    return (p1->lambda + x1 + s.s.value()) / ((2.0 * n + 1.0) * x1);
  }

  if (std::holds_alternative<Example2>(params)) {
    if (!is_binary(x1)) {
      throw DomainError("example2 estimator needs x1 in {0, 1}, got " +
                        std::to_string(x1));
    }
    const auto& s = std::get<Ex2Stats>(stats);
    if (variant == ClosedFormVariant::paper) {
      // Printed worked-example formula. Disagrees with the defining
      // integral (see README); kept for reproducibility.
      const double n = static_cast<double>(s.n);
      const double top = static_cast<double>(s.n_plus0() + 2 * s.n01 + 1);
      const double bottom = 2.0 * n + top + (x1 == 0.0 ? 2.0 : 3.0);
      return top / bottom;
    }
    const double a = ex2::alpha(s);
    const double b = ex2::beta(s);
    return x1 == 1.0 ? (a + 1.0) / (a + b + 1.0) : (b + 1.0) / (a + b + 1.0);
  }

  const auto& p3 = std::get<Example3>(params);
  if (!std::isfinite(x1)) {
    throw DomainError("example3 estimator needs finite x1");
  }
  const auto& s = std::get<Ex3Stats>(stats);
  if (variant == ClosedFormVariant::paper) {
    const double rho1 = ex3::rho1_paper(s.n, p3);
    const double m1 = ex3::m1_paper(s.n, s.s1.value(), p3);
    return (1.0 - rho1) * m1 + rho1 * x1;
  }
  const double slope = ex3::predictive_slope(s.n, p3);
  const double center = ex3::posterior_mean(s.n, s.s1.value(), p3);
  return (1.0 - slope) * center + slope * x1;
}

}  // namespace bayesreg
