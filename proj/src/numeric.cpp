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

#include "bayesreg/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "bayesreg/errors.hpp"

namespace bayesreg {

double log_sum_exp(std::span<const double> log_values) {
  double max_log = kNegInf;
  for (const double v : log_values) max_log = std::max(max_log, v);
  if (max_log == kNegInf) return kNegInf;

  KahanSum acc;
  for (const double v : log_values) acc.add(std::exp(v - max_log));
  return max_log + std::log(acc.value());
}

namespace {

// Rational approximations from Wichura's algorithm AS 241 (PPND16),
// accurate to ~1e-16 over (0, 1).
double ppnd16_central(double r) {
  static constexpr double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e2,
      1.9715909503065514427e3,  1.3731693765509461125e4,
      4.5921953931549871457e4,  6.7265770927008700853e4,
      3.3430575583588128105e4,  2.5090809287301226727e3};
  static constexpr double b[8] = {
      1.0,                      4.2313330701600911252e1,
      6.8718700749205790830e2,  5.3941960214247511077e3,
      2.1213794301586595867e4,  3.9307895800092710610e4,
      2.8729085735721942674e4,  5.2264952788528545610e3};
  double num = a[7], den = b[7];
  for (int i = 6; i >= 0; --i) {
    num = num * r + a[i];
    den = den * r + b[i];
  }
  return num / den;
}

double ppnd16_tail(double r) {
  if (r <= 5.0) {
    static constexpr double c[8] = {
        1.42343711074968357734e0,  4.63033784615654529590e0,
        5.76949722146069140550e0,  3.64784832476320460504e0,
        1.27045825245236838258e0,  2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {
        1.0,                       2.05319162663775882187e0,
        1.67638483018380384940e0,  6.89767334985100004550e-1,
        1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    const double s = r - 1.6;
    double num = c[7], den = d[7];
    for (int i = 6; i >= 0; --i) {
      num = num * s + c[i];
      den = den * s + d[i];
    }
    return num / den;
  }
  static constexpr double e[8] = {
      6.65790464350110377720e0,  5.46378491116411436990e0,
      1.78482653991729133580e0,  2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[8] = {
      1.0,                       5.99832206555887937690e-1,
      1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};
  const double s = r - 5.0;
  double num = e[7], den = f[7];
  for (int i = 6; i >= 0; --i) {
    num = num * s + e[i];
    den = den * s + f[i];
  }
  return num / den;
}

}  // namespace

double inverse_normal_cdf(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("inverse_normal_cdf: u must lie strictly inside (0, 1), got " +
                      std::to_string(u));
  }
  const double q = u - 0.5;
  if (std::fabs(q) <= 0.425) {
    return q * ppnd16_central(0.180625 - q * q);
  }
  const double p = q < 0.0 ? u : 1.0 - u;
  const double val = ppnd16_tail(std::sqrt(-std::log(p)));
  return q < 0.0 ? -val : val;
}

}  // namespace bayesreg
