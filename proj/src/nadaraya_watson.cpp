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

#include "bayesreg/nadaraya_watson.hpp"

#include <cmath>

#include "bayesreg/errors.hpp"
#include "bayesreg/numeric.hpp"

namespace bayesreg {

NWConfig NWConfig::with_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw UsageError("nadaraya_watson: bandwidth must be positive and finite, got " +
                     std::to_string(h));
  }
  return NWConfig{h};
}

double nw_bandwidth(const Dataset& data, const NWConfig& config) {
  if (config.bandwidth) return *config.bandwidth;
  if (data.empty()) throw UsageError("nadaraya_watson: empty dataset");

  const double n = static_cast<double>(data.n());
  double mean = 0.0;
  for (const ObsPair& pair : data.pairs) mean += pair.x1;
  mean /= n;
  double ss = 0.0;
  for (const ObsPair& pair : data.pairs) {
    ss += (pair.x1 - mean) * (pair.x1 - mean);
  }
  const double sd = data.n() >= 2 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  // Silverman-style rule, floored when the predictor is constant.
  const double h = 1.06 * sd * std::pow(n, -0.2);
  return h > 0.0 ? h : 1e-6;
}

double nadaraya_watson(const Dataset& data, double x1, const NWConfig& config) {
  if (data.empty()) throw UsageError("nadaraya_watson: empty dataset");
  const double h = nw_bandwidth(data, config);

  KahanSum numerator, denominator;
  for (const ObsPair& pair : data.pairs) {
    const double t = (x1 - pair.x1) / h;
    const double w = std::exp(-0.5 * t * t);
    numerator.add(w * pair.x2);
    denominator.add(w);
  }
  if (denominator.value() < 1e-300) {
    throw NoMassError("nadaraya_watson: kernel mass underflowed at x1 = " +
                      std::to_string(x1) + " (h = " + std::to_string(h) + ")");
  }
  return numerator.value() / denominator.value();
}

}  // namespace bayesreg
