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

#include <algorithm>
#include <cmath>
#include <vector>

#include "bayesreg/conjugate.hpp"
#include "bayesreg/errors.hpp"
#include "bayesreg/model.hpp"
#include "oracles.hpp"

using namespace bayesreg;

namespace {

struct Bundle {
  HyperParams params;
  std::unique_ptr<ModelSpec> model;
  std::unique_ptr<PriorSpec> prior;
};

Bundle bundle(HyperParams params) {
  Bundle b{params, make_model(params), make_prior(params)};
  return b;
}

}  // namespace

TEST_CASE("support descriptors") {
  const Support positive = Support::positive();
  CHECK(positive.contains(1e-12));
  CHECK_FALSE(positive.contains(0.0));
  CHECK_FALSE(positive.contains(-1.0));
  CHECK(positive.contains(1e300));
  CHECK_FALSE(positive.contains(kPosInf));

  const Support binary = Support::binary();
  CHECK(binary.contains(0.0));
  CHECK(binary.contains(1.0));
  CHECK_FALSE(binary.contains(0.5));
  CHECK_FALSE(binary.contains(-1.0));
  CHECK_FALSE(binary.contains(2.0));

  CHECK(Support::open_unit().contains(0.5));
  CHECK_FALSE(Support::open_unit().contains(1.0));
}

TEST_CASE("regression_truth closed forms") {
  const auto b1 = bundle(Example1{2.0});
  CHECK(regression_truth(*b1.model, Theta{2.0}, 0.5) == 1.0);

  const auto b2 = bundle(Example2{});
  CHECK(regression_truth(*b2.model, Theta{0.3}, 1.0) == 0.3);
  CHECK(regression_truth(*b2.model, Theta{0.3}, 0.0) == 0.7);

  const auto b3 = bundle(Example3{0.0, 1.0, 1.0, 0.5});
  CHECK(regression_truth(*b3.model, Theta{1.0}, 3.0) == 2.0);

  CHECK_THROWS_AS(regression_truth(*b1.model, Theta{-1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(regression_truth(*b1.model, Theta{2.0}, 0.0), DomainError);
  CHECK_THROWS_AS(regression_truth(*b2.model, Theta{0.3}, 0.5), DomainError);
}

TEST_CASE("sample_pair respects parameter support") {
  const auto b2 = bundle(Example2{});
  Rng rng(7);
  CHECK_THROWS_AS(sample_pair(*b2.model, Theta{1.0}, rng), DomainError);
  CHECK_THROWS_AS(sample_pair(*b2.model, Theta{0.0}, rng), DomainError);

  // Degenerate-coin limit: with theta ~ 1 both tosses are heads.
  const Theta near_one{1.0 - 1e-12};
  for (int i = 0; i < 200; ++i) {
    const ObsPair pair = sample_pair(*b2.model, near_one, rng);
    CHECK(pair.x1 == 1.0);
    CHECK(pair.x2 == 1.0);
  }
}

TEST_CASE("example2 sampler matches the exact cell probabilities") {
  const auto b2 = bundle(Example2{});
  const double theta = 0.5;
  // Exact enumeration of the four-cell joint probability function.
  const double p_x2_one = theta * theta + (1.0 - theta) * (1.0 - theta);
  CHECK(p_x2_one == 0.5);

  Rng rng(2024);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    ones += sample_pair(*b2.model, Theta{theta}, rng).x2 == 1.0 ? 1 : 0;
  }
  const double se = std::sqrt(p_x2_one * (1.0 - p_x2_one) / n);
  CHECK(std::fabs(static_cast<double>(ones) / n - p_x2_one) < 3.0 * se);
}

TEST_CASE("example1 sampler has the exponential X1 marginal") {
  const auto b1 = bundle(Example1{1.0});
  Rng rng(11);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x1 = sample_pair(*b1.model, Theta{2.0}, rng).x1;
    sum += x1;
    sum_sq += x1 * x1;
  }
  const double mean = sum / n;  // X1 ~ Exp(2), mean 1/2
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  CHECK(std::fabs(mean - 0.5) < 3.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("grow_dataset: prefix property and determinism") {
  const auto b1 = bundle(Example1{1.0});
  Rng rng(5);

  const Dataset empty = grow_dataset(*b1.model, Theta{1.0}, 0, rng, Dataset{});
  CHECK(empty.n() == 0);

  Rng rng_a(123), rng_b(123);
  const Dataset d3 = grow_dataset(*b1.model, Theta{1.0}, 3, rng_a, Dataset{});
  const Dataset d5 = grow_dataset(*b1.model, Theta{1.0}, 5, rng_a, d3);
  CHECK(d5.n() == 5);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(d5.pairs[i].x1 == d3.pairs[i].x1);
    CHECK(d5.pairs[i].x2 == d3.pairs[i].x2);
  }

  const Dataset e3 = grow_dataset(*b1.model, Theta{1.0}, 3, rng_b, Dataset{});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(e3.pairs[i].x1 == d3.pairs[i].x1);
    CHECK(e3.pairs[i].x2 == d3.pairs[i].x2);
  }

  CHECK_THROWS_AS(grow_dataset(*b1.model, Theta{1.0}, 2, rng, d5), UsageError);
}

TEST_CASE("joint densities are normalized and consistent with marginals") {
  SUBCASE("example2: exact four-cell sum") {
    const auto b2 = bundle(Example2{});
    for (const double theta : {0.1, 0.37, 0.5, 0.92}) {
      double total = 0.0;
      for (const double k1 : {0.0, 1.0}) {
        double marginal = 0.0;
        for (const double k2 : {0.0, 1.0}) {
          const double cell = std::exp(b2.model->log_joint(Theta{theta}, {k1, k2}));
          total += cell;
          marginal += cell;
        }
        CHECK(marginal ==
              doctest::Approx(std::exp(b2.model->log_x1_marginal(Theta{theta}, k1)))
                  .epsilon(1e-14));
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  SUBCASE("example1: quadrature over the positive quadrant") {
    const auto b1 = bundle(Example1{1.0});
    for (const double theta : {0.4, 1.0, 2.5}) {
      const double marginal_mass = test_oracle::integrate_positive([&](double x1) {
        return std::exp(b1.model->log_x1_marginal(Theta{theta}, x1));
      });
      CHECK(marginal_mass == doctest::Approx(1.0).epsilon(1e-7));

      for (const double x1 : {0.4, 1.0, 3.0}) {
        // integrating the joint over x2 recovers the X1 marginal
        const double joint_slice = test_oracle::integrate_positive([&](double x2) {
          return std::exp(b1.model->log_joint(Theta{theta}, {x1, x2}));
        });
        const double marginal = std::exp(b1.model->log_x1_marginal(Theta{theta}, x1));
        CHECK(joint_slice == doctest::Approx(marginal).epsilon(1e-7));
      }
    }
  }

  SUBCASE("example3: quadrature over the plane") {
    const auto b3 = bundle(Example3{0.0, 1.0, 1.3, -0.4});
    for (const double theta : {-1.0, 0.0, 0.8}) {
      const double marginal_mass = test_oracle::integrate_real(
          [&](double x1) {
            return std::exp(b3.model->log_x1_marginal(Theta{theta}, x1));
          },
          theta, 1.3);
      CHECK(marginal_mass == doctest::Approx(1.0).epsilon(1e-9));

      for (const double x1 : {-0.7, 0.5, 2.0}) {
        const double joint_slice = test_oracle::integrate_real(
            [&](double x2) {
              return std::exp(b3.model->log_joint(Theta{theta}, {x1, x2}));
            },
            theta, 1.3);
        const double marginal = std::exp(b3.model->log_x1_marginal(Theta{theta}, x1));
        CHECK(joint_slice == doctest::Approx(marginal).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("conditional means match Monte Carlo binning") {
  SUBCASE("example1, x1 near 1") {
    const auto b1 = bundle(Example1{1.0});
    const Theta theta{1.5};
    Rng rng(31);
    double sum = 0.0, sum_sq = 0.0;
    int hits = 0;
    for (int i = 0; i < 200000; ++i) {
      const ObsPair pair = b1.model->sample_pair(theta, rng);
      if (std::fabs(pair.x1 - 1.0) < 0.05) {
        sum += pair.x2;
        sum_sq += pair.x2 * pair.x2;
        ++hits;
      }
    }
    REQUIRE(hits > 1000);
    const double mean = sum / hits;
    const double se = std::sqrt((sum_sq / hits - mean * mean) / hits);
    const double truth = regression_truth(*b1.model, theta, 1.0);
    CHECK(std::fabs(mean - truth) < 3.0 * se + 0.01);
  }

  SUBCASE("example3, x1 near 1") {
    const auto b3 = bundle(Example3{});
    const Theta theta{0.5};
    Rng rng(32);
    double sum = 0.0, sum_sq = 0.0;
    int hits = 0;
    for (int i = 0; i < 200000; ++i) {
      const ObsPair pair = b3.model->sample_pair(theta, rng);
      if (std::fabs(pair.x1 - 1.0) < 0.05) {
        sum += pair.x2;
        sum_sq += pair.x2 * pair.x2;
        ++hits;
      }
    }
    REQUIRE(hits > 1000);
    const double mean = sum / hits;
    const double se = std::sqrt((sum_sq / hits - mean * mean) / hits);
    CHECK(std::fabs(mean - regression_truth(*b3.model, theta, 1.0)) < 3.0 * se + 0.01);
  }

  SUBCASE("example2, exact conditioning on x1 = 1") {
    const auto b2 = bundle(Example2{});
    const Theta theta{0.35};
    Rng rng(33);
    double sum = 0.0;
    int hits = 0;
    for (int i = 0; i < 100000; ++i) {
      const ObsPair pair = b2.model->sample_pair(theta, rng);
      if (pair.x1 == 1.0) {
        sum += pair.x2;
        ++hits;
      }
    }
    REQUIRE(hits > 1000);
    const double mean = sum / hits;
    const double se = std::sqrt(0.35 * 0.65 / hits);
    CHECK(std::fabs(mean - 0.35) < 3.0 * se);
  }
}

TEST_CASE("priors: quantiles are monotone and samples match them") {
  for (const HyperParams params :
       {HyperParams{Example1{1.3}}, HyperParams{Example2{}},
        HyperParams{Example3{-0.5, 2.0, 1.0, 0.2}}}) {
    const auto prior = make_prior(params);

    double last = -kPosInf;
    for (int i = 1; i < 200; ++i) {
      const double q = prior->quantile(i / 200.0).value;
      CHECK(q >= last);
      last = q;
    }

    // KS-style check: push samples through the model CDF, compare with
    // the uniform.
    const auto cdf = [&](double theta) -> double {
      if (std::holds_alternative<Example1>(params)) {
        return 1.0 - std::exp(-std::get<Example1>(params).lambda * theta);
      }
      if (std::holds_alternative<Example2>(params)) return theta;
      const auto& p = std::get<Example3>(params);
      return test_oracle::normal_cdf((theta - p.mu) / p.tau);
    };

    Rng rng(17);
    const int n = 2000;
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = cdf(prior->sample(rng).value);
    std::sort(u.begin(), u.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      ks = std::max(ks, std::fabs(u[i] - (i + 1.0) / n));
      ks = std::max(ks, std::fabs(u[i] - static_cast<double>(i) / n));
    }
    // 1% critical value of the Kolmogorov statistic
    CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));

    CHECK_THROWS_AS(prior->quantile(0.0), DomainError);
    CHECK_THROWS_AS(prior->quantile(1.0), DomainError);
  }
}

TEST_CASE("hyperparameter validation") {
  CHECK_THROWS_AS(make_model(Example1{0.0}), DomainError);
  CHECK_THROWS_AS(make_model(Example1{-2.0}), DomainError);
  CHECK_THROWS_AS(make_model(Example3{0.0, 0.0, 1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(make_model(Example3{0.0, 1.0, -1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(make_model(Example3{0.0, 1.0, 1.0, 1.0}), DomainError);
  CHECK_NOTHROW(make_model(Example3{0.0, 1.0, 1.0, -0.99}));
}
