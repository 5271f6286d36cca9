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

// Test-side quadrature oracles. Deliberately independent of the
// library's posterior-grid code: plain composite Simpson plus interval
// maps, accurate far beyond the tolerances they back.

#ifndef BAYESREG_TESTS_ORACLES_HPP
#define BAYESREG_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>

namespace test_oracle {

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int panels = 4096) {
  const double h = (b - a) / (2.0 * panels);
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < 2 * panels; i += 2) odd += f(a + i * h);
  for (int i = 2; i < 2 * panels; i += 2) even += f(a + i * h);
  return (h / 3.0) * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

/// Integral over (0, inf) via x = t/(1-t).
inline double integrate_positive(const std::function<double(double)>& f,
                                 int panels = 8192) {
  const auto g = [&](double t) {
    const double x = t / (1.0 - t);
    const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
    return f(x) * jac;
  };
  return simpson(g, 1e-12, 1.0 - 1e-12, panels);
}

/// Integral over the real line via x = center + scale * tan(pi(t - 1/2)).
inline double integrate_real(const std::function<double(double)>& f,
                             double center = 0.0, double scale = 1.0,
                             int panels = 8192) {
  const double pi = 3.14159265358979323846;
  const auto g = [&](double t) {
    const double angle = pi * (t - 0.5);
    const double x = center + scale * std::tan(angle);
    const double c = std::cos(angle);
    const double jac = scale * pi / (c * c);
    return f(x) * jac;
  };
  return simpson(g, 1e-9, 1.0 - 1e-9, panels);
}

/// Standard normal CDF, for KS-style checks.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace test_oracle

#endif  // BAYESREG_TESTS_ORACLES_HPP
