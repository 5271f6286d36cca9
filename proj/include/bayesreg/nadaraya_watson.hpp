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

#ifndef BAYESREG_NADARAYA_WATSON_HPP
#define BAYESREG_NADARAYA_WATSON_HPP

#include <optional>

#include "bayesreg/types.hpp"

namespace bayesreg {

/// Gaussian-kernel Nadaraya-Watson configuration. Without an explicit
/// bandwidth the Silverman-style rule h = 1.06 * sd(x1) * n^{-1/5} is
/// used, floored at 1e-6 when sd = 0.
struct NWConfig {
  std::optional<double> bandwidth;  // > 0 when explicit; nullopt = auto

  static NWConfig with_bandwidth(double h);
  static NWConfig automatic() { return NWConfig{}; }
};

/// Resolved bandwidth for a dataset under the config's rule.
double nw_bandwidth(const Dataset& data, const NWConfig& config);

/// Kernel-weighted local average of the responses:
///   sum_i K((x1 - x1_i)/h) x2_i / sum_i K((x1 - x1_i)/h).
/// Throws UsageError on an empty dataset and NoMassError when the
/// denominator falls below 1e-300.
double nadaraya_watson(const Dataset& data, double x1, const NWConfig& config);

}  // namespace bayesreg

#endif  // BAYESREG_NADARAYA_WATSON_HPP
