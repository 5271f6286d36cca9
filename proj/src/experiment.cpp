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

#include "bayesreg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bayesreg/errors.hpp"
#include "bayesreg/nadaraya_watson.hpp"
#include "bayesreg/posterior_grid.hpp"

namespace bayesreg {

namespace {

using json = nlohmann::json;

std::string trim_ws(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream in(s);
  while (std::getline(in, current, sep)) parts.push_back(trim_ws(current));
  return parts;
}

double parse_double(const std::string& field, const std::string& value) {
  const std::string v = trim_ws(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(field, "field '" + field + "': expected a finite real, got '" +
                                 value + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& field, const std::string& value) {
  const std::string v = trim_ws(value);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(field, "field '" + field +
                                 "': expected an unsigned integer, got '" + value +
                                 "'");
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& field,
                                    const std::string& value) {
  std::vector<double> out;
  for (const std::string& part : split(value, ',')) {
    if (part.empty()) {
      throw ConfigError(field, "field '" + field + "': empty list entry");
    }
    out.push_back(parse_double(field, part));
  }
  if (out.empty()) throw ConfigError(field, "field '" + field + "': empty list");
  return out;
}

std::vector<std::size_t> parse_count_list(const std::string& field,
                                          const std::string& value) {
  std::vector<std::size_t> out;
  for (const std::string& part : split(value, ',')) {
    if (part.empty()) {
      throw ConfigError(field, "field '" + field + "': empty list entry");
    }
    out.push_back(static_cast<std::size_t>(parse_u64(field, part)));
  }
  if (out.empty()) throw ConfigError(field, "field '" + field + "': empty list");
  return out;
}

struct RawConfig {
  std::map<std::string, std::string> values;
  std::optional<std::string> command;
};

RawConfig parse_flat(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim_ws(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", "line " + std::to_string(line_no) +
                                      ": expected 'key = value', got '" + stripped +
                                      "'");
    }
    const std::string key = trim_ws(stripped.substr(0, eq));
    const std::string value = trim_ws(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config", "line " + std::to_string(line_no) + ": empty key");
    }
    if (raw.values.count(key)) {
      throw ConfigError(key, "field '" + key + "': duplicated");
    }
    raw.values[key] = value;
  }
  return raw;
}

RawConfig parse_json_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("config", std::string("invalid JSON config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config", "JSON config must be an object");
  }
  // Metadata files embed the flat config under "config".
  const json& obj = doc.contains("config") ? doc.at("config") : doc;
  if (!obj.is_object()) {
    throw ConfigError("config", "JSON 'config' must be an object");
  }
  RawConfig raw;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_string()) {
      raw.values[key] = value.get<std::string>();
    } else if (value.is_number() || value.is_boolean()) {
      raw.values[key] = value.dump();
    } else {
      throw ConfigError(key, "field '" + key + "': expected a scalar value");
    }
  }
  if (doc.contains("command") && doc.at("command").is_string() &&
      !raw.values.count("command")) {
    raw.command = doc.at("command").get<std::string>();
  }
  return raw;
}

std::set<std::string> keys_for(Command command, const std::string& model) {
  std::set<std::string> keys = {"command", "model",      "seed",
                                "output_dir", "grid_size", "estimator"};
  if (model == "example1") keys.insert("lambda");
  if (model == "example3") keys.insert({"mu", "tau", "sigma", "rho"});
  switch (command) {
    case Command::estimate:
      keys.insert({"x1_eval", "dataset"});
      break;
    case Command::consistency:
      keys.insert({"n_schedule", "replications", "x1_eval"});
      break;
    case Command::risk:
    case Command::compare:
      keys.insert({"n_schedule", "replications", "loss_k", "trim"});
      break;
  }
  return keys;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "estimate") return Command::estimate;
  if (name == "consistency") return Command::consistency;
  if (name == "risk") return Command::risk;
  if (name == "compare") return Command::compare;
  throw ConfigError("command", "unknown command '" + name +
                                   "' (expected estimate, consistency, risk or "
                                   "compare)");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::estimate: return "estimate";
    case Command::consistency: return "consistency";
    case Command::risk: return "risk";
    case Command::compare: return "compare";
  }
  throw UsageError("unknown command");
}

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    throw NumericError("non-finite value in report output");
  }
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw NumericError("failed to format a real value");
  return std::string(buffer, ptr);
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<Command> command_from_cli) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("config", "cannot read config file '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const auto first_char = text.find_first_not_of(" \t\r\n");
  RawConfig raw = (first_char != std::string::npos && text[first_char] == '{')
                      ? parse_json_config(text)
                      : parse_flat(text);

  ExperimentConfig config;

  // command: CLI subcommand wins; a config-file command must agree.
  std::optional<std::string> file_command = raw.command;
  if (raw.values.count("command")) file_command = raw.values.at("command");
  if (command_from_cli) {
    config.command = *command_from_cli;
    if (file_command && parse_command(*file_command) != config.command) {
      throw ConfigError("command", "config file names command '" + *file_command +
                                       "' but '" + to_string(config.command) +
                                       "' was requested");
    }
  } else if (file_command) {
    config.command = parse_command(*file_command);
  } else {
    throw ConfigError("command", "missing required field 'command'");
  }

  if (!raw.values.count("model")) {
    throw ConfigError("model", "missing required field 'model'");
  }
  const std::string model = trim_ws(raw.values.at("model"));
  try {
    config.hyperparams = params_for_model(model);
  } catch (const UsageError& e) {
    throw ConfigError("model", e.what());
  }

  const std::set<std::string> allowed = keys_for(config.command, model);
  for (const auto& [key, value] : raw.values) {
    if (!allowed.count(key)) {
      throw ConfigError(key, "field '" + key + "' is not used by command '" +
                                 to_string(config.command) + "' with model '" +
                                 model + "'");
    }
  }
  auto has = [&](const char* key) { return raw.values.count(key) != 0; };
  auto get = [&](const char* key) { return raw.values.at(key); };

  // hyperparameters
  if (auto* p1 = std::get_if<Example1>(&config.hyperparams)) {
    if (has("lambda")) p1->lambda = parse_double("lambda", get("lambda"));
    if (!(p1->lambda > 0.0)) {
      throw ConfigError("lambda", "field 'lambda': must be positive");
    }
  } else if (auto* p3 = std::get_if<Example3>(&config.hyperparams)) {
    if (has("mu")) p3->mu = parse_double("mu", get("mu"));
    if (has("tau")) p3->tau = parse_double("tau", get("tau"));
    if (has("sigma")) p3->sigma = parse_double("sigma", get("sigma"));
    if (has("rho")) p3->rho = parse_double("rho", get("rho"));
    if (!(p3->tau > 0.0)) throw ConfigError("tau", "field 'tau': must be positive");
    if (!(p3->sigma > 0.0)) {
      throw ConfigError("sigma", "field 'sigma': must be positive");
    }
    if (!(p3->rho > -1.0 && p3->rho < 1.0)) {
      throw ConfigError("rho", "field 'rho': must lie inside (-1, 1)");
    }
  }

  if (!has("seed")) throw ConfigError("seed", "missing required field 'seed'");
  config.seed = parse_u64("seed", get("seed"));

  if (has("output_dir")) config.output_dir = get("output_dir");
  if (config.output_dir.empty()) {
    throw ConfigError("output_dir", "field 'output_dir': must not be empty");
  }

  config.grid_size = config.command == Command::estimate ? kOracleGridSize
                                                         : kMonteCarloGridSize;
  if (has("grid_size")) {
    config.grid_size = static_cast<std::size_t>(parse_u64("grid_size", get("grid_size")));
    if (config.grid_size < 2) {
      throw ConfigError("grid_size", "field 'grid_size': must be at least 2");
    }
  }

  // estimators
  const std::string estimator_value =
      has("estimator") ? get("estimator") : std::string("bayes-closed");
  for (const std::string& name : split(estimator_value, ',')) {
    try {
      config.estimators.push_back(parse_estimator_id(name));
    } catch (const UsageError& e) {
      throw ConfigError("estimator", e.what());
    }
  }
  if (config.command == Command::compare) {
    if (config.estimators.size() < 2) {
      throw ConfigError("estimator",
                        "field 'estimator': compare needs at least two "
                        "comma-separated estimators");
    }
  } else if (config.command != Command::estimate &&
             config.estimators.size() != 1) {
    throw ConfigError("estimator", "field 'estimator': expected a single estimator");
  }
  if (config.command == Command::estimate &&
      config.estimators.front() == EstimatorId::truth) {
    throw ConfigError("estimator",
                      "field 'estimator': 'truth' needs a parameter draw and is "
                      "only available in risk-lab experiments");
  }

  // run sizes
  if (config.command != Command::estimate) {
    if (!has("n_schedule")) {
      throw ConfigError("n_schedule", "missing required field 'n_schedule'");
    }
    config.n_schedule = parse_count_list("n_schedule", get("n_schedule"));
    for (std::size_t i = 0; i < config.n_schedule.size(); ++i) {
      if (config.n_schedule[i] == 0) {
        throw ConfigError("n_schedule", "field 'n_schedule': entries must be >= 1");
      }
      if (i > 0 && config.n_schedule[i] <= config.n_schedule[i - 1]) {
        throw ConfigError("n_schedule",
                          "field 'n_schedule': must be strictly increasing");
      }
    }
    if (config.command == Command::compare && config.n_schedule.size() != 1) {
      throw ConfigError("n_schedule",
                        "field 'n_schedule': compare takes exactly one sample size");
    }
    if (!has("replications")) {
      throw ConfigError("replications", "missing required field 'replications'");
    }
    config.replications =
        static_cast<std::size_t>(parse_u64("replications", get("replications")));
    if (config.replications < 2) {
      throw ConfigError("replications", "field 'replications': must be at least 2");
    }
  }

  if (config.command == Command::estimate ||
      config.command == Command::consistency) {
    if (!has("x1_eval")) {
      throw ConfigError("x1_eval", "missing required field 'x1_eval'");
    }
    config.x1_eval = parse_real_list("x1_eval", get("x1_eval"));
  }

  if (config.command == Command::risk || config.command == Command::compare) {
    if (has("loss_k")) {
      const std::uint64_t k = parse_u64("loss_k", get("loss_k"));
      if (k != 1 && k != 2) {
        throw ConfigError("loss_k", "field 'loss_k': must be 1 or 2");
      }
      config.loss_k = static_cast<int>(k);
    }
    // Example 1 risk runs trim the x1 draw by default: the untrimmed
    // risk integrand is heavy-tailed near x1 = 0 (see README).
    if (std::holds_alternative<Example1>(config.hyperparams)) {
      config.trim = TrimBand{0.05, 1.0};
    }
    if (has("trim")) {
      const std::vector<double> band = parse_real_list("trim", get("trim"));
      if (band.size() != 2) {
        throw ConfigError("trim", "field 'trim': expected 'lo,hi'");
      }
      config.trim = TrimBand{band[0], band[1]};
      if (!(config.trim.lo >= 0.0 && config.trim.lo < config.trim.hi &&
            config.trim.hi <= 1.0)) {
        throw ConfigError("trim", "field 'trim': need 0 <= lo < hi <= 1");
      }
    }
  }

  if (config.command == Command::estimate && has("dataset")) {
    config.dataset_path = get("dataset");
  }

  // model-dependent validation of the evaluation points
  if (!config.x1_eval.empty()) {
    const auto model_spec = make_model(config.hyperparams);
    for (const double x1 : config.x1_eval) {
      if (!model_spec->in_predictor_support(x1)) {
        throw ConfigError("x1_eval", "field 'x1_eval': " + format_double(x1) +
                                         " outside predictor support " +
                                         model_spec->predictor_support().describe());
      }
    }
  }
  return config;
}

std::map<std::string, std::string> resolved_config(const ExperimentConfig& config) {
  std::map<std::string, std::string> out;
  out["command"] = to_string(config.command);
  out["model"] = model_name(config.hyperparams);
  out["seed"] = std::to_string(config.seed);
  out["output_dir"] = config.output_dir;
  out["grid_size"] = std::to_string(config.grid_size);

  if (const auto* p1 = std::get_if<Example1>(&config.hyperparams)) {
    out["lambda"] = format_double(p1->lambda);
  } else if (const auto* p3 = std::get_if<Example3>(&config.hyperparams)) {
    out["mu"] = format_double(p3->mu);
    out["tau"] = format_double(p3->tau);
    out["sigma"] = format_double(p3->sigma);
    out["rho"] = format_double(p3->rho);
  }

  std::vector<std::string> estimators;
  for (const EstimatorId id : config.estimators) estimators.push_back(to_string(id));
  out["estimator"] = join(estimators, ",");

  if (!config.n_schedule.empty()) {
    std::vector<std::string> ns;
    for (const std::size_t n : config.n_schedule) ns.push_back(std::to_string(n));
    out["n_schedule"] = join(ns, ",");
  }
  if (config.command != Command::estimate) {
    out["replications"] = std::to_string(config.replications);
  }
  if (!config.x1_eval.empty()) {
    std::vector<std::string> xs;
    for (const double x : config.x1_eval) xs.push_back(format_double(x));
    out["x1_eval"] = join(xs, ",");
  }
  if (config.command == Command::risk || config.command == Command::compare) {
    out["loss_k"] = std::to_string(config.loss_k);
    out["trim"] = format_double(config.trim.lo) + "," + format_double(config.trim.hi);
  }
  if (config.command == Command::estimate && !config.dataset_path.empty()) {
    out["dataset"] = config.dataset_path;
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, const ModelSpec& model) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("dataset", "cannot read dataset file '" + path.string() + "'");
  }
  Dataset data;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim_ws(line);
    if (stripped.empty()) continue;
    const std::vector<std::string> cells = split(stripped, ',');
    if (cells.size() != 2) {
      throw ConfigError("dataset", "dataset line " + std::to_string(line_no) +
                                       ": expected 'x1,x2', got '" + stripped + "'");
    }
    const ObsPair pair{parse_double("dataset", cells[0]),
                       parse_double("dataset", cells[1])};
    try {
      model.require_pair(pair);
    } catch (const DomainError& e) {
      throw ConfigError("dataset",
                        "dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    data.pairs.push_back(pair);
  }
  return data;
}

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << text;
  if (!out) {
    throw std::runtime_error("failed while writing '" + path.string() + "'");
  }
}

std::string run_estimate_csv(const ExperimentConfig& config,
                             const ModelSpec& model, const PriorSpec& prior) {
  Dataset data;
  if (!config.dataset_path.empty()) {
    data = load_dataset(config.dataset_path, model);
  }
  const bool needs_grid =
      std::find(config.estimators.begin(), config.estimators.end(),
                EstimatorId::bayes_grid) != config.estimators.end();
  PosteriorGrid grid;
  if (needs_grid) grid = build_grid(model, prior, data, config.grid_size);

  std::ostringstream csv;
  csv << "x1,estimator,value\n";
  for (const EstimatorId id : config.estimators) {
    SufficientStats stats = empty_stats(config.hyperparams);
    if (id == EstimatorId::bayes_closed || id == EstimatorId::bayes_closed_paper) {
      stats = stats_from_dataset(config.hyperparams, data);
    }
    if (id == EstimatorId::nadaraya_watson && data.empty()) {
      throw ConfigError("dataset", "nadaraya-watson needs a nonempty dataset");
    }
    for (const double x1 : config.x1_eval) {
      double value = 0.0;
      switch (id) {
        case EstimatorId::bayes_closed:
          value = closed_form_regression(config.hyperparams, stats, x1,
                                         ClosedFormVariant::posterior);
          break;
        case EstimatorId::bayes_closed_paper:
          value = closed_form_regression(config.hyperparams, stats, x1,
                                         ClosedFormVariant::paper);
          break;
        case EstimatorId::bayes_grid:
          value = predictive_regression(grid, model, x1);
          break;
        case EstimatorId::nadaraya_watson:
          value = nadaraya_watson(data, x1, NWConfig::automatic());
          break;
        case EstimatorId::truth:
          throw UsageError("truth estimator is not available for estimate");
      }
      csv << format_double(x1) << ',' << to_string(id) << ','
          << format_double(value) << '\n';
    }
  }
  return csv.str();
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  const auto model = make_model(config.hyperparams);
  const auto prior = make_prior(config.hyperparams);

  std::string csv;
  std::size_t fallbacks = 0;
  json summary = json::object();

  switch (config.command) {
    case Command::estimate: {
      csv = run_estimate_csv(config, *model, *prior);
      break;
    }
    case Command::risk: {
      RiskOptions options;
      options.estimator = config.estimators.front();
      options.n_schedule = config.n_schedule;
      options.replications = config.replications;
      options.loss_k = config.loss_k;
      options.trim = config.trim;
      options.seed = Seed{config.seed};
      options.grid_size = config.grid_size;
      const RiskCurve curve = bayes_risk(config.hyperparams, options);
      fallbacks = curve.fallbacks;
      summary["evaluations"] = curve.evaluations;
      std::ostringstream out;
      out << "n,loss_k,estimator,estimate,mc_se,replications,trimmed\n";
      for (const RiskRow& row : curve.rows) {
        out << row.n << ',' << row.loss_k << ',' << to_string(row.estimator) << ','
            << format_double(row.estimate) << ',' << format_double(row.mc_se) << ','
            << row.replications << ',' << (row.trimmed ? "true" : "false") << '\n';
      }
      csv = out.str();
      break;
    }
    case Command::consistency: {
      ConsistencyOptions options;
      options.estimator = config.estimators.front();
      options.n_schedule = config.n_schedule;
      options.replications = config.replications;
      options.x1_eval = config.x1_eval;
      options.seed = Seed{config.seed};
      options.grid_size = config.grid_size;
      const PathReport report = consistency_paths(config.hyperparams, options);
      fallbacks = report.fallbacks;
      summary["evaluations"] = report.evaluations;
      json medians = json::array();
      for (const PathSummary& s : report.summaries) {
        medians.push_back({{"n", s.n},
                           {"median_max_dev", s.median_max_dev},
                           {"p90_max_dev", s.p90_max_dev}});
      }
      summary["max_deviation_quantiles"] = medians;
      std::ostringstream out;
      out << "replication,n,x1,abs_deviation\n";
      for (const PathDeviation& d : report.deviations) {
        out << d.replication << ',' << d.n << ',' << format_double(d.x1) << ','
            << format_double(d.abs_deviation) << '\n';
      }
      csv = out.str();
      break;
    }
    case Command::compare: {
      CompareOptions options;
      options.estimators = config.estimators;
      options.n = config.n_schedule.front();
      options.replications = config.replications;
      options.loss_k = config.loss_k;
      options.trim = config.trim;
      options.seed = Seed{config.seed};
      options.grid_size = config.grid_size;
      const CompareTable table = compare_estimators(config.hyperparams, options);
      fallbacks = table.fallbacks;
      summary["evaluations"] = table.evaluations;
      json violations = json::array();
      for (const CompareRow& row : table.rows) {
        if (row.beats_reference) violations.push_back(to_string(row.estimator));
      }
      summary["beats_reference"] = violations;
      std::ostringstream out;
      out << "n,loss_k,estimator,estimate,mc_se,replications,trimmed,"
             "paired_diff,paired_se\n";
      for (const CompareRow& row : table.rows) {
        out << table.n << ',' << table.loss_k << ',' << to_string(row.estimator)
            << ',' << format_double(row.estimate) << ','
            << format_double(row.mc_se) << ',' << table.replications << ','
            << (table.trimmed ? "true" : "false") << ','
            << format_double(row.paired_diff) << ','
            << format_double(row.paired_se) << '\n';
      }
      csv = out.str();
      break;
    }
  }

  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);

  RunResult result;
  result.csv_path = dir / "results.csv";
  result.metadata_path = dir / "metadata.json";
  result.fallbacks = fallbacks;
  write_text_file(result.csv_path, csv);

  json metadata;
  metadata["artifact"] = kArtifactName;
  metadata["version"] = kArtifactVersion;
  metadata["command"] = to_string(config.command);
  metadata["seed"] = config.seed;
  metadata["config"] = resolved_config(config);
  metadata["results_csv"] = "results.csv";
  summary["fallbacks"] = fallbacks;
  metadata["summary"] = summary;
  write_text_file(result.metadata_path, metadata.dump(2) + "\n");
  return result;
}

}  // namespace bayesreg
