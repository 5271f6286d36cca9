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

#include "bayesreg/risk_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "bayesreg/errors.hpp"
#include "bayesreg/nadaraya_watson.hpp"
#include "bayesreg/rng.hpp"

namespace bayesreg {

EstimatorId parse_estimator_id(const std::string& name) {
  if (name == "truth") return EstimatorId::truth;
  if (name == "bayes-closed" || name == "bayes-closed(beta-posterior)" ||
      name == "bayes-closed(posterior)") {
    return EstimatorId::bayes_closed;
  }
  if (name == "bayes-closed-paper" || name == "bayes-closed(paper)") {
    return EstimatorId::bayes_closed_paper;
  }
  if (name == "bayes-grid") return EstimatorId::bayes_grid;
  if (name == "nadaraya-watson") return EstimatorId::nadaraya_watson;
  throw UsageError("unknown estimator '" + name +
                   "' (expected truth, bayes-closed, bayes-closed-paper, "
                   "bayes-grid or nadaraya-watson)");
}

std::string to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::truth: return "truth";
    case EstimatorId::bayes_closed: return "bayes-closed";
    case EstimatorId::bayes_closed_paper: return "bayes-closed-paper";
    case EstimatorId::bayes_grid: return "bayes-grid";
    case EstimatorId::nadaraya_watson: return "nadaraya-watson";
  }
  throw UsageError("unknown estimator id");
}

unsigned resolve_worker_count(std::size_t task_count) {
  if (task_count <= 1) return 1;
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("BAYES_REGRESS_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1) {
      workers = static_cast<unsigned>(parsed);
    }
  }
  return static_cast<unsigned>(
      std::min<std::size_t>(workers, task_count));
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body) {
  const unsigned workers = resolve_worker_count(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> cancelled{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!cancelled.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      try {
        body(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        cancelled.store(true, std::memory_order_relaxed);
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw UsageError("sample_quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw UsageError("sample_quantile: q must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

struct LabContext {
  const HyperParams& params;
  std::unique_ptr<ModelSpec> model;
  std::unique_ptr<PriorSpec> prior;
  std::size_t grid_size;
  NWConfig nw;

  LabContext(const HyperParams& p, std::size_t grid,
             std::optional<double> nw_bandwidth)
      : params(p),
        model(make_model(p)),
        prior(make_prior(p)),
        grid_size(grid),
        nw(resolve_nw(p, nw_bandwidth)) {}

  // With a binary predictor the kernel bandwidth 1e-4 turns the local
  // average into per-cell means; otherwise the Silverman rule applies.
  static NWConfig resolve_nw(const HyperParams& p,
                             std::optional<double> requested) {
    if (requested) return NWConfig::with_bandwidth(*requested);
    if (std::holds_alternative<Example2>(p)) {
      return NWConfig::with_bandwidth(1e-4);
    }
    return NWConfig::automatic();
  }
};

double response_mean(const Dataset& data) {
  KahanSum acc;
  for (const ObsPair& pair : data.pairs) acc.add(pair.x2);
  return acc.value() / static_cast<double>(data.n());
}

/// One estimator evaluation with the documented fallback: a no-mass
/// failure is replaced by the sample response mean and counted.
double evaluate_estimator(EstimatorId id, const LabContext& ctx,
                          const Dataset& data, double x1, Theta theta,
                          std::uint32_t& fallbacks) {
  try {
    switch (id) {
      case EstimatorId::truth:
        return ctx.model->regression(theta, x1);
      case EstimatorId::bayes_closed:
        return closed_form_regression(ctx.params,
                                      stats_from_dataset(ctx.params, data), x1,
                                      ClosedFormVariant::posterior);
      case EstimatorId::bayes_closed_paper:
        return closed_form_regression(ctx.params,
                                      stats_from_dataset(ctx.params, data), x1,
                                      ClosedFormVariant::paper);
      case EstimatorId::bayes_grid: {
        const PosteriorGrid grid =
            build_grid(*ctx.model, *ctx.prior, data, ctx.grid_size);
        return predictive_regression(grid, *ctx.model, x1);
      }
      case EstimatorId::nadaraya_watson:
        return nadaraya_watson(data, x1, ctx.nw);
    }
    throw UsageError("unknown estimator id");
  } catch (const NoPredictiveMassError&) {
  } catch (const NoMassError&) {
  }
  ++fallbacks;
  if (data.empty()) {
    throw ExperimentError("estimator fallback is undefined for an empty sample");
  }
  return response_mean(data);
}

void check_trim(const TrimBand& trim) {
  if (!(trim.lo >= 0.0 && trim.lo < trim.hi && trim.hi <= 1.0)) {
    throw UsageError("trim quantiles must satisfy 0 <= lo < hi <= 1, got [" +
                     std::to_string(trim.lo) + ", " + std::to_string(trim.hi) + "]");
  }
}

void check_schedule(const std::vector<std::size_t>& schedule) {
  if (schedule.empty()) throw UsageError("n_schedule must not be empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] == 0) {
      throw UsageError("n_schedule entries must be at least 1");
    }
    if (i > 0 && schedule[i] <= schedule[i - 1]) {
      throw UsageError("n_schedule must be strictly increasing");
    }
  }
}

void check_loss(int loss_k) {
  if (loss_k != 1 && loss_k != 2) {
    throw UsageError("loss_k must be 1 or 2, got " + std::to_string(loss_k));
  }
}

void check_replications(std::size_t replications) {
  if (replications < 2) {
    throw UsageError("replications must be at least 2, got " +
                     std::to_string(replications));
  }
}

/// x1 ~ X1-marginal, rejected outside the trim quantile band.
double draw_x1(const LabContext& ctx, Theta theta, const TrimBand& trim,
               Rng& rng) {
  if (!trim.active()) return ctx.model->x1_quantile(theta, rng.uniform01());
  const double lo_edge =
      trim.lo > 0.0 ? ctx.model->x1_quantile(theta, trim.lo) : kNegInf;
  const double hi_edge =
      trim.hi < 1.0 ? ctx.model->x1_quantile(theta, trim.hi) : kPosInf;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double x1 = ctx.model->x1_quantile(theta, rng.uniform01());
    if (x1 >= lo_edge && x1 <= hi_edge) return x1;
  }
  throw NumericError("trim band rejected 100000 consecutive draws");
}

double loss_of(double deviation, int loss_k) {
  const double d = std::fabs(deviation);
  return loss_k == 1 ? d : d * d;
}

void check_report_value(double v) {
  if (!std::isfinite(v)) {
    throw NumericError("non-finite value reached a report");
  }
}

struct MeanAndSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanAndSe mean_and_se(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  KahanSum sum;
  for (const double v : values) sum.add(v);
  const double mean = sum.value() / n;
  KahanSum ss;
  for (const double v : values) ss.add((v - mean) * (v - mean));
  const double sd = std::sqrt(ss.value() / (n - 1.0));
  return {mean, sd / std::sqrt(n)};
}

void enforce_failure_budget(std::size_t fallbacks, std::size_t evaluations) {
  if (static_cast<double>(fallbacks) >
      0.05 * static_cast<double>(evaluations)) {
    throw ExperimentError("estimator fallbacks exceeded 5% of evaluations (" +
                          std::to_string(fallbacks) + " of " +
                          std::to_string(evaluations) + ")");
  }
}

}  // namespace

RiskCurve bayes_risk(const HyperParams& params, const RiskOptions& options) {
  check_schedule(options.n_schedule);
  check_replications(options.replications);
  check_loss(options.loss_k);
  check_trim(options.trim);

  const LabContext ctx(params, options.grid_size, options.nw_bandwidth);
  const std::size_t reps = options.replications;
  const std::size_t steps = options.n_schedule.size();
  const std::size_t max_n = options.n_schedule.back();

  std::vector<std::vector<double>> losses(steps, std::vector<double>(reps));
  std::vector<std::uint32_t> fallback_counts(reps, 0);

  parallel_for(reps, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed.master, "risk", r));
    const Theta theta = ctx.prior->sample(rng);
    const double x1 = draw_x1(ctx, theta, options.trim, rng);
    const Dataset path = grow_dataset(*ctx.model, theta, max_n, rng, Dataset{});
    const double truth = ctx.model->regression(theta, x1);
    for (std::size_t i = 0; i < steps; ++i) {
      const Dataset prefix = path.prefix(options.n_schedule[i]);
      const double m = evaluate_estimator(options.estimator, ctx, prefix, x1,
                                          theta, fallback_counts[r]);
      losses[i][r] = loss_of(m - truth, options.loss_k);
    }
  });

  RiskCurve curve;
  curve.evaluations = reps * steps;
  for (const std::uint32_t c : fallback_counts) curve.fallbacks += c;
  enforce_failure_budget(curve.fallbacks, curve.evaluations);

  for (std::size_t i = 0; i < steps; ++i) {
    const MeanAndSe agg = mean_and_se(losses[i]);
    check_report_value(agg.mean);
    check_report_value(agg.se);
    curve.rows.push_back(RiskRow{options.n_schedule[i], options.loss_k,
                                 options.estimator, agg.mean, agg.se, reps,
                                 options.trim.active()});
  }
  return curve;
}

PathReport consistency_paths(const HyperParams& params,
                             const ConsistencyOptions& options) {
  check_schedule(options.n_schedule);
  check_replications(options.replications);
  if (options.x1_eval.empty()) {
    throw UsageError("consistency_paths: x1_eval must not be empty");
  }

  const LabContext ctx(params, options.grid_size, options.nw_bandwidth);
  for (const double x1 : options.x1_eval) ctx.model->require_x1(x1);

  const std::size_t reps = options.replications;
  const std::size_t steps = options.n_schedule.size();
  const std::size_t points = options.x1_eval.size();
  const std::size_t max_n = options.n_schedule.back();

  PathReport report;
  report.theta_draws.resize(reps);
  report.deviations.resize(reps * steps * points);
  report.max_dev.assign(steps, std::vector<double>(reps));
  std::vector<std::uint32_t> fallback_counts(reps, 0);

  parallel_for(reps, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed.master, "consistency", r));
    const Theta theta = ctx.prior->sample(rng);
    report.theta_draws[r] = theta.value;
    const Dataset path = grow_dataset(*ctx.model, theta, max_n, rng, Dataset{});
    for (std::size_t i = 0; i < steps; ++i) {
      const Dataset prefix = path.prefix(options.n_schedule[i]);
      double max_dev = 0.0;
      for (std::size_t p = 0; p < points; ++p) {
        const double x1 = options.x1_eval[p];
        const double m = evaluate_estimator(options.estimator, ctx, prefix, x1,
                                            theta, fallback_counts[r]);
        const double dev = std::fabs(m - ctx.model->regression(theta, x1));
        max_dev = std::max(max_dev, dev);
        report.deviations[(r * steps + i) * points + p] =
            PathDeviation{r, options.n_schedule[i], x1, dev};
      }
      report.max_dev[i][r] = max_dev;
    }
  });

  report.evaluations = reps * steps * points;
  for (const std::uint32_t c : fallback_counts) report.fallbacks += c;
  enforce_failure_budget(report.fallbacks, report.evaluations);

  for (std::size_t i = 0; i < steps; ++i) {
    for (const double v : report.max_dev[i]) check_report_value(v);
    report.summaries.push_back(PathSummary{
        options.n_schedule[i], sample_quantile(report.max_dev[i], 0.5),
        sample_quantile(report.max_dev[i], 0.9)});
    for (std::size_t p = 0; p < points; ++p) {
      std::vector<double> devs(reps);
      for (std::size_t r = 0; r < reps; ++r) {
        devs[r] = report.deviations[(r * steps + i) * points + p].abs_deviation;
      }
      report.point_summaries.push_back(PathPointSummary{
          options.n_schedule[i], options.x1_eval[p],
          sample_quantile(devs, 0.5)});
    }
  }
  return report;
}

CompareTable compare_estimators(const HyperParams& params,
                                const CompareOptions& options) {
  if (options.estimators.size() < 2) {
    throw UsageError("compare_estimators: need at least two estimator ids");
  }
  if (options.n == 0) throw UsageError("compare_estimators: n must be at least 1");
  check_replications(options.replications);
  check_loss(options.loss_k);
  check_trim(options.trim);

  const LabContext ctx(params, options.grid_size, options.nw_bandwidth);
  const std::size_t reps = options.replications;
  const std::size_t count = options.estimators.size();

  std::vector<std::vector<double>> losses(count, std::vector<double>(reps));
  std::vector<std::uint32_t> fallback_counts(reps, 0);

  // Common random numbers: one (theta, x1, path) draw per replication,
  // shared by every estimator.
  parallel_for(reps, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed.master, "compare", r));
    const Theta theta = ctx.prior->sample(rng);
    const double x1 = draw_x1(ctx, theta, options.trim, rng);
    const Dataset data =
        grow_dataset(*ctx.model, theta, options.n, rng, Dataset{});
    const double truth = ctx.model->regression(theta, x1);
    for (std::size_t e = 0; e < count; ++e) {
      const double m = evaluate_estimator(options.estimators[e], ctx, data, x1,
                                          theta, fallback_counts[r]);
      losses[e][r] = loss_of(m - truth, options.loss_k);
    }
  });

  CompareTable table;
  table.n = options.n;
  table.loss_k = options.loss_k;
  table.replications = reps;
  table.trimmed = options.trim.active();
  table.evaluations = reps * count;
  for (const std::uint32_t c : fallback_counts) table.fallbacks += c;
  enforce_failure_budget(table.fallbacks, table.evaluations);

  for (std::size_t e = 0; e < count; ++e) {
    const MeanAndSe agg = mean_and_se(losses[e]);
    std::vector<double> diffs(reps);
    for (std::size_t r = 0; r < reps; ++r) diffs[r] = losses[e][r] - losses[0][r];
    const MeanAndSe paired = mean_and_se(diffs);
    check_report_value(agg.mean);
    check_report_value(agg.se);
    check_report_value(paired.mean);
    check_report_value(paired.se);
    table.rows.push_back(CompareRow{
        options.estimators[e], agg.mean, agg.se, paired.mean, paired.se,
        e > 0 && paired.mean < -2.0 * paired.se});
  }
  return table;
}

}  // namespace bayesreg
