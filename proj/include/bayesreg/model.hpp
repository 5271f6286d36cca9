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

#ifndef BAYESREG_MODEL_HPP
#define BAYESREG_MODEL_HPP

#include <cstddef>
#include <string>

#include "bayesreg/errors.hpp"
#include "bayesreg/rng.hpp"
#include "bayesreg/types.hpp"

namespace bayesreg {

/// A one-parameter Bayesian sampling model for a predictor/response
/// pair: the joint log-density of (X1, X2) given theta, the X1-marginal
/// log-density, the true regression curve r_theta(x1) = E(X2 | X1 = x1),
/// and samplers. Densities are handled in log space throughout.
///
/// Implementations may assume arguments are inside the declared
/// supports; the free functions below validate and raise DomainError.
class ModelSpec {
 public:
  virtual ~ModelSpec() = default;

  virtual std::string name() const = 0;

  virtual double log_joint(Theta theta, const ObsPair& pair) const = 0;
  virtual double log_x1_marginal(Theta theta, double x1) const = 0;

  /// r_theta(x1), the conditional mean of the response.
  virtual double regression(Theta theta, double x1) const = 0;

  /// One draw from the joint kernel: x1 from the marginal, then x2 from
  /// the conditional kernel.
  virtual ObsPair sample_pair(Theta theta, Rng& rng) const = 0;

  /// Quantile function of the X1 marginal, u in (0, 1).
  virtual double x1_quantile(Theta theta, double u) const = 0;

  virtual const Support& parameter_support() const = 0;
  virtual const Support& predictor_support() const = 0;
  virtual const Support& response_support() const = 0;

  bool in_parameter_support(Theta theta) const {
    return parameter_support().contains(theta.value);
  }
  bool in_predictor_support(double x1) const {
    return predictor_support().contains(x1);
  }
  bool in_pair_support(const ObsPair& pair) const {
    return predictor_support().contains(pair.x1) &&
           response_support().contains(pair.x2);
  }

  /// Throwing variants of the support predicates, with the offending
  /// value in the message.
  void require_theta(Theta theta) const;
  void require_x1(double x1) const;
  void require_pair(const ObsPair& pair) const;
};

/// Prior distribution on the parameter: log-density, quantile function,
/// and a sampler. Sampling is by inversion, so sample() and quantile()
/// always describe the same distribution.
class PriorSpec {
 public:
  virtual ~PriorSpec() = default;

  virtual std::string name() const = 0;
  virtual double log_density(Theta theta) const = 0;

  /// u must lie strictly inside (0, 1).
  virtual Theta quantile(double u) const = 0;

  virtual Theta sample(Rng& rng) const { return quantile(rng.uniform01()); }
};

/// One validated draw (x1, x2) ~ R_theta.
ObsPair sample_pair(const ModelSpec& model, Theta theta, Rng& rng);

/// Extends `existing` with fresh i.i.d. draws up to target_n pairs.
/// Existing pairs are copied unchanged, so datasets at growing n values
/// are prefixes of one simulated path.
Dataset grow_dataset(const ModelSpec& model, Theta theta, std::size_t target_n,
                     Rng& rng, const Dataset& existing);

/// The true regression curve r_theta(x1), validated.
double regression_truth(const ModelSpec& model, Theta theta, double x1);

}  // namespace bayesreg

#endif  // BAYESREG_MODEL_HPP
