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

#ifndef BAYESREG_NUMERIC_HPP
#define BAYESREG_NUMERIC_HPP

#include <cmath>
#include <limits>
#include <span>

namespace bayesreg {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Kahan-compensated accumulator. Keeps long streaming sums accurate
/// enough that streaming and batch statistics agree to ~1e-15 relative.
class KahanSum {
 public:
  KahanSum() = default;
  explicit KahanSum(double initial) : sum_(initial) {}

  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }

  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// log(sum_i exp(v_i)) with the max-shift trick. Empty input or all
/// -inf yields -inf.
double log_sum_exp(std::span<const double> log_values);

/// Quantile of the standard normal distribution (Wichura's AS 241,
/// double-precision branch). u must lie strictly inside (0, 1).
double inverse_normal_cdf(double u);

}  // namespace bayesreg

#endif  // BAYESREG_NUMERIC_HPP
