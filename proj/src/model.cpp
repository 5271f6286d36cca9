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

#include "bayesreg/model.hpp"

#include <sstream>

#include "bayesreg/errors.hpp"

namespace bayesreg {

std::string Support::describe() const {
  std::ostringstream out;
  if (integers_only) out << "integers in ";
  out << (lo_open ? '(' : '[');
  out << lo << ", " << hi;
  out << (hi_open ? ')' : ']');
  return out.str();
}

void ModelSpec::require_theta(Theta theta) const {
  if (!in_parameter_support(theta)) {
    std::ostringstream msg;
    msg << name() << ": parameter " << theta.value << " outside support "
        << parameter_support().describe();
    throw DomainError(msg.str());
  }
}

void ModelSpec::require_x1(double x1) const {
  if (!in_predictor_support(x1)) {
    std::ostringstream msg;
    msg << name() << ": predictor " << x1 << " outside support "
        << predictor_support().describe();
    throw DomainError(msg.str());
  }
}

void ModelSpec::require_pair(const ObsPair& pair) const {
  require_x1(pair.x1);
  if (!response_support().contains(pair.x2)) {
    std::ostringstream msg;
    msg << name() << ": response " << pair.x2 << " outside support "
        << response_support().describe();
    throw DomainError(msg.str());
  }
}

ObsPair sample_pair(const ModelSpec& model, Theta theta, Rng& rng) {
  model.require_theta(theta);
  return model.sample_pair(theta, rng);
}

Dataset grow_dataset(const ModelSpec& model, Theta theta, std::size_t target_n,
                     Rng& rng, const Dataset& existing) {
  if (existing.n() > target_n) {
    throw UsageError("grow_dataset: existing sample has " +
                     std::to_string(existing.n()) + " pairs, more than target " +
                     std::to_string(target_n));
  }
  model.require_theta(theta);
  Dataset grown = existing;
  grown.pairs.reserve(target_n);
  while (grown.n() < target_n) {
    grown.pairs.push_back(model.sample_pair(theta, rng));
  }
  return grown;
}

double regression_truth(const ModelSpec& model, Theta theta, double x1) {
  model.require_theta(theta);
  model.require_x1(x1);
  return model.regression(theta, x1);
}

}  // namespace bayesreg
