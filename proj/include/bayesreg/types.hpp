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

#ifndef BAYESREG_TYPES_HPP
#define BAYESREG_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bayesreg/numeric.hpp"

namespace bayesreg {

/// The scalar model parameter.
struct Theta {
  double value = 0.0;
};

/// One observation: predictor x1 and response x2. Binary outcomes are
/// encoded as the reals 0.0 / 1.0.
struct ObsPair {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// An ordered i.i.d. sample. Prefixes of a Dataset are valid Datasets,
/// which is what lets one simulated path stand in for an infinite
/// sample.
struct Dataset {
  std::vector<ObsPair> pairs;

  std::size_t n() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }

  /// The first m pairs as their own dataset.
  Dataset prefix(std::size_t m) const {
    Dataset d;
    d.pairs.assign(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(m));
    return d;
  }
};

/// Master seed of an experiment. Every rng stream in the artifact is
/// derived from it through derive_seed (see rng.hpp).
struct Seed {
  std::uint64_t master = 0;
};

/// An interval support descriptor with open/closed/infinite endpoints.
/// integers_only = true restricts the interval to the integers it
/// contains (the binary model declares {0, 1} as [0, 1] over integers).
struct Support {
  double lo = kNegInf;
  double hi = kPosInf;
  bool lo_open = true;
  bool hi_open = true;
  bool integers_only = false;

  bool contains(double v) const {
    if (!std::isfinite(v)) return false;
    if (lo_open ? !(v > lo) : !(v >= lo)) return false;
    if (hi_open ? !(v < hi) : !(v <= hi)) return false;
    if (integers_only && v != std::floor(v)) return false;
    return true;
  }

  std::string describe() const;

  static Support real_line() { return Support{}; }
  static Support positive() { return Support{0.0, kPosInf, true, true, false}; }
  static Support open_unit() { return Support{0.0, 1.0, true, true, false}; }
  static Support binary() { return Support{0.0, 1.0, false, false, true}; }
};

}  // namespace bayesreg

#endif  // BAYESREG_TYPES_HPP
