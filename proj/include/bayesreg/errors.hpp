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

#ifndef BAYESREG_ERRORS_HPP
#define BAYESREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bayesreg {

/// A value fell outside a declared support. Out-of-support queries are
/// errors, never silent zeros.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The caller combined incompatible arguments (wrong stats variant,
/// empty dataset where one is required, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric result left the representable/finite range.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every posterior node underflowed: the data are impossible under the
/// whole grid.
class DegeneratePosteriorError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The predictive density of the query point vanished at every node.
class NoPredictiveMassError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Kernel weights underflowed in a local average.
class NoMassError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Too many replications failed for the experiment to be reportable.
class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A config file violated the schema. Carries the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace bayesreg

#endif  // BAYESREG_ERRORS_HPP
