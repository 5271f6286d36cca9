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

#ifndef BAYESREG_EXPERIMENT_HPP
#define BAYESREG_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bayesreg/conjugate.hpp"
#include "bayesreg/risk_lab.hpp"

namespace bayesreg {

inline constexpr const char* kArtifactName = "bayesreg";
inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Command { estimate, consistency, risk, compare };

Command parse_command(const std::string& name);
std::string to_string(Command command);

/// A fully resolved experiment: model, hyperparameters, estimators and
/// run sizes. Field names and value syntax are the flat config-file
/// keys; see load_config.
struct ExperimentConfig {
  Command command = Command::estimate;
  HyperParams hyperparams;
  std::vector<EstimatorId> estimators;
  std::vector<std::size_t> n_schedule;
  std::size_t replications = 0;
  std::size_t grid_size = 0;
  std::vector<double> x1_eval;
  int loss_k = 2;
  TrimBand trim;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::string dataset_path;  // estimate only; empty = empty sample
};

/// Loads and validates a config file. Two formats are accepted: a flat
/// `key = value` document, and the metadata JSON emitted by a previous
/// run (whose embedded config is re-loaded, making reruns exact).
/// Violations raise ConfigError with the offending field.
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<Command> command_from_cli);

/// The config echoed back as flat key/value strings, defaults resolved.
/// Feeding these back through load_config reproduces the experiment.
std::map<std::string, std::string> resolved_config(const ExperimentConfig& config);

/// Headerless comma-separated "x1,x2" rows, validated against the
/// model's supports.
Dataset load_dataset(const std::filesystem::path& path, const ModelSpec& model);

struct RunResult {
  std::filesystem::path csv_path;
  std::filesystem::path metadata_path;
  std::size_t fallbacks = 0;
};

/// Executes the experiment and writes results.csv plus metadata.json
/// into output_dir. CSV bytes depend only on (config, seed).
RunResult run_experiment(const ExperimentConfig& config);

/// Shortest round-trip decimal form of a double; the one float format
/// used in every artifact file.
std::string format_double(double value);

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitExperimentError = 3;

}  // namespace bayesreg

#endif  // BAYESREG_EXPERIMENT_HPP
