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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "bayesreg/errors.hpp"
#include "bayesreg/experiment.hpp"
#include "bayesreg/nadaraya_watson.hpp"
#include "bayesreg/posterior_grid.hpp"
#include "bayesreg/rng.hpp"

namespace py = pybind11;

namespace {

using namespace bayesreg;

using PairList = std::vector<std::pair<double, double>>;

Dataset to_dataset(const PairList& pairs) {
  Dataset data;
  data.pairs.reserve(pairs.size());
  for (const auto& [x1, x2] : pairs) data.pairs.push_back(ObsPair{x1, x2});
  return data;
}

PairList from_dataset(const Dataset& data) {
  PairList pairs;
  pairs.reserve(data.n());
  for (const ObsPair& p : data.pairs) pairs.emplace_back(p.x1, p.x2);
  return pairs;
}

ClosedFormVariant parse_variant(const std::string& variant) {
  if (variant == "posterior" || variant == "beta-posterior") {
    return ClosedFormVariant::posterior;
  }
  if (variant == "paper") return ClosedFormVariant::paper;
  throw UsageError("unknown closed-form variant '" + variant +
                   "' (expected 'posterior' or 'paper')");
}

/// One bundled conjugate family: the sampling model, its prior, and the
/// closed-form machinery, held together for convenient scripting.
class BoundExample {
 public:
  explicit BoundExample(HyperParams params)
      : params_(std::move(params)),
        model_(make_model(params_)),
        prior_(make_prior(params_)) {}

  std::string name() const { return model_name(params_); }

  double truth(double theta, double x1) const {
    return regression_truth(*model_, Theta{theta}, x1);
  }

  PairList sample_dataset(double theta, std::size_t n, std::uint64_t seed) const {
    Rng rng(seed);
    return from_dataset(grow_dataset(*model_, Theta{theta}, n, rng, Dataset{}));
  }

  double prior_quantile(double u) const { return prior_->quantile(u).value; }

  double closed_form(const PairList& data, double x1,
                     const std::string& variant) const {
    const Dataset d = to_dataset(data);
    return closed_form_regression(params_, stats_from_dataset(params_, d), x1,
                                  parse_variant(variant));
  }

  double grid_estimate(const PairList& data, double x1,
                       std::size_t grid_size) const {
    const PosteriorGrid grid =
        build_grid(*model_, *prior_, to_dataset(data), grid_size);
    return predictive_regression(grid, *model_, x1);
  }

  std::vector<double> grid_curve(const PairList& data,
                                 const std::vector<double>& x1_grid,
                                 std::size_t grid_size) const {
    const PosteriorGrid grid =
        build_grid(*model_, *prior_, to_dataset(data), grid_size);
    return curve_estimate(grid, *model_, x1_grid);
  }

  std::vector<double> posterior_weights(const PairList& data,
                                        std::size_t grid_size) const {
    return build_grid(*model_, *prior_, to_dataset(data), grid_size).weights;
  }

  const HyperParams& params() const { return params_; }

 private:
  HyperParams params_;
  std::unique_ptr<ModelSpec> model_;
  std::unique_ptr<PriorSpec> prior_;
};

py::dict risk_row_to_dict(const RiskRow& row) {
  py::dict d;
  d["n"] = row.n;
  d["loss_k"] = row.loss_k;
  d["estimator"] = to_string(row.estimator);
  d["estimate"] = row.estimate;
  d["mc_se"] = row.mc_se;
  d["replications"] = row.replications;
  d["trimmed"] = row.trimmed;
  return d;
}

py::list run_bayes_risk(const BoundExample& example, const std::string& estimator,
                        const std::vector<std::size_t>& n_schedule,
                        std::size_t replications, int loss_k, std::uint64_t seed,
                        std::pair<double, double> trim, std::size_t grid_size) {
  RiskOptions options;
  options.estimator = parse_estimator_id(estimator);
  options.n_schedule = n_schedule;
  options.replications = replications;
  options.loss_k = loss_k;
  options.trim = TrimBand{trim.first, trim.second};
  options.seed = Seed{seed};
  options.grid_size = grid_size;
  const RiskCurve curve = bayes_risk(example.params(), options);
  py::list rows;
  for (const RiskRow& row : curve.rows) rows.append(risk_row_to_dict(row));
  return rows;
}

py::dict run_consistency(const BoundExample& example, const std::string& estimator,
                         const std::vector<std::size_t>& n_schedule,
                         std::size_t replications,
                         const std::vector<double>& x1_eval, std::uint64_t seed,
                         std::size_t grid_size) {
  ConsistencyOptions options;
  options.estimator = parse_estimator_id(estimator);
  options.n_schedule = n_schedule;
  options.replications = replications;
  options.x1_eval = x1_eval;
  options.seed = Seed{seed};
  options.grid_size = grid_size;
  const PathReport report = consistency_paths(example.params(), options);
  py::list summaries;
  for (const PathSummary& s : report.summaries) {
    py::dict d;
    d["n"] = s.n;
    d["median_max_dev"] = s.median_max_dev;
    d["p90_max_dev"] = s.p90_max_dev;
    summaries.append(d);
  }
  py::dict out;
  out["summaries"] = summaries;
  out["theta_draws"] = report.theta_draws;
  out["fallbacks"] = report.fallbacks;
  return out;
}

py::list run_compare(const BoundExample& example,
                     const std::vector<std::string>& estimators, std::size_t n,
                     std::size_t replications, int loss_k, std::uint64_t seed,
                     std::pair<double, double> trim, std::size_t grid_size) {
  CompareOptions options;
  for (const std::string& name : estimators) {
    options.estimators.push_back(parse_estimator_id(name));
  }
  options.n = n;
  options.replications = replications;
  options.loss_k = loss_k;
  options.trim = TrimBand{trim.first, trim.second};
  options.seed = Seed{seed};
  options.grid_size = grid_size;
  const CompareTable table = compare_estimators(example.params(), options);
  py::list rows;
  for (const CompareRow& row : table.rows) {
    py::dict d;
    d["estimator"] = to_string(row.estimator);
    d["estimate"] = row.estimate;
    d["mc_se"] = row.mc_se;
    d["paired_diff"] = row.paired_diff;
    d["paired_se"] = row.paired_se;
    d["beats_reference"] = row.beats_reference;
    rows.append(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayes estimator of a regression curve: closed forms, grid "
            "quadrature and Monte Carlo risk experiments";
  m.attr("__version__") = kArtifactVersion;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<ExperimentError>(m, "ExperimentError", PyExc_RuntimeError);

  py::class_<BoundExample>(m, "Example")
      .def_property_readonly("name", &BoundExample::name)
      .def("truth", &BoundExample::truth, py::arg("theta"), py::arg("x1"),
           "True regression curve r_theta(x1)")
      .def("sample_dataset", &BoundExample::sample_dataset, py::arg("theta"),
           py::arg("n"), py::arg("seed"),
           "n i.i.d. (x1, x2) draws as a list of pairs")
      .def("prior_quantile", &BoundExample::prior_quantile, py::arg("u"))
      .def("closed_form", &BoundExample::closed_form, py::arg("data"),
           py::arg("x1"), py::arg("variant") = "posterior",
           "Closed-form Bayes estimate m*_n(data, x1)")
      .def("grid_estimate", &BoundExample::grid_estimate, py::arg("data"),
           py::arg("x1"), py::arg("grid_size") = kOracleGridSize,
           "Quadrature posterior-predictive regression at x1")
      .def("grid_curve", &BoundExample::grid_curve, py::arg("data"),
           py::arg("x1_grid"), py::arg("grid_size") = kOracleGridSize)
      .def("posterior_weights", &BoundExample::posterior_weights, py::arg("data"),
           py::arg("grid_size") = kOracleGridSize);

  m.def(
      "example1", [](double lambda) { return BoundExample(Example1{lambda}); },
      py::arg("lambda_") = 1.0,
      "Exponential chain model with an Exp(lambda) prior");
  m.def(
      "example2", []() { return BoundExample(Example2{}); },
      "Dependent coin-pair model with a uniform prior");
  m.def(
      "example3",
      [](double mu, double tau, double sigma, double rho) {
        return BoundExample(Example3{mu, tau, sigma, rho});
      },
      py::arg("mu") = 0.0, py::arg("tau") = 1.0, py::arg("sigma") = 1.0,
      py::arg("rho") = 0.5,
      "Bivariate normal model with an N(mu, tau^2) prior");

  m.def(
      "nadaraya_watson",
      [](const PairList& data, double x1, std::optional<double> bandwidth) {
        const NWConfig config = bandwidth ? NWConfig::with_bandwidth(*bandwidth)
                                          : NWConfig::automatic();
        return nadaraya_watson(to_dataset(data), x1, config);
      },
      py::arg("data"), py::arg("x1"), py::arg("bandwidth") = std::nullopt,
      "Gaussian-kernel local average; bandwidth=None uses the Silverman rule");

  m.def("bayes_risk", &run_bayes_risk, py::arg("example"), py::arg("estimator"),
        py::arg("n_schedule"), py::arg("replications"), py::arg("loss_k") = 2,
        py::arg("seed") = 0, py::arg("trim") = std::pair<double, double>{0.0, 1.0},
        py::arg("grid_size") = kMonteCarloGridSize,
        "Monte Carlo Bayes-risk rows per sample size");
  m.def("consistency_paths", &run_consistency, py::arg("example"),
        py::arg("estimator"), py::arg("n_schedule"), py::arg("replications"),
        py::arg("x1_eval"), py::arg("seed") = 0,
        py::arg("grid_size") = kMonteCarloGridSize,
        "Deviation quantiles along growing sample paths");
  m.def("compare_estimators", &run_compare, py::arg("example"),
        py::arg("estimators"), py::arg("n"), py::arg("replications"),
        py::arg("loss_k") = 2, py::arg("seed") = 0,
        py::arg("trim") = std::pair<double, double>{0.0, 1.0},
        py::arg("grid_size") = kMonteCarloGridSize,
        "Paired risk comparison with common random numbers");

  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("tag"),
        py::arg("index"), "The documented replication seed derivation");
}
