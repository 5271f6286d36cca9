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

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bayesreg/errors.hpp"
#include "bayesreg/experiment.hpp"

namespace {

void print_error(const std::string& kind, const std::string& message,
                 const std::string& field = "") {
  nlohmann::json err;
  err["error"] = kind;
  err["message"] = message;
  if (!field.empty()) err["field"] = field;
  std::cerr << err.dump() << std::endl;
}

int run(bayesreg::Command command, const std::string& config_path,
        const std::string& output_dir_override) {
  using namespace bayesreg;
  try {
    ExperimentConfig config = load_config(config_path, command);
    if (!output_dir_override.empty()) config.output_dir = output_dir_override;
    const RunResult result = run_experiment(config);
    std::cout << "wrote " << result.csv_path.string() << " and "
              << result.metadata_path.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    print_error("config", e.what(), e.field());
    return kExitConfigError;
  } catch (const ExperimentError& e) {
    print_error("experiment", e.what());
    return kExitExperimentError;
  } catch (const std::exception& e) {
    print_error("failure", e.what());
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayes estimator of a regression curve: closed forms, grid "
               "quadrature, and Monte Carlo risk experiments"};
  app.set_version_flag("--version", std::string(bayesreg::kArtifactName) + " " +
                                        bayesreg::kArtifactVersion);
  app.require_subcommand(1);

  struct SubArgs {
    std::string config;
    std::string output_dir;
  };

  std::map<std::string, SubArgs> args;
  const std::pair<const char*, const char*> commands[] = {
      {"estimate", "Evaluate an estimator on a dataset at fixed x1 points"},
      {"consistency", "Trace estimator deviations along growing sample paths"},
      {"risk", "Monte Carlo Bayes-risk curve over sample sizes"},
      {"compare", "Risk comparison of several estimators on common draws"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    SubArgs& sub_args = args[name];
    sub->add_option("--config", sub_args.config, "Experiment config file")
        ->required();
    sub->add_option("--output-dir", sub_args.output_dir,
                    "Override the config's output_dir");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  return run(bayesreg::parse_command(name), args[name].config,
             args[name].output_dir);
}
