#include "fwboost/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "fwboost/adaboost_fw.hpp"
#include "fwboost/baselines.hpp"
#include "fwboost/data_io.hpp"
#include "fwboost/rng.hpp"

namespace fwboost {

Metric task_metric(Task task) {
  return task == Task::kClassification ? Metric::kZeroOneError : Metric::kMeanSquaredError;
}

double evaluate_metric(Metric metric, const Vector& preds, const Vector& targets) {
  if (preds.size() != targets.size()) throw std::invalid_argument("metric length mismatch");
  const double m = static_cast<double>(preds.size());
  if (metric == Metric::kMeanSquaredError) return (preds - targets).squaredNorm() / m;
  double wrong = 0.0;
  for (Index i = 0; i < preds.size(); ++i) {
    const double sign = preds(i) >= 0.0 ? 1.0 : -1.0;
    if (sign != targets(i)) wrong += 1.0;
  }
  return wrong / m;
}

SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train fraction must lie in (0,1)");
  const int m = static_cast<int>(data.rows());
  const int n_train = static_cast<int>(std::floor(train_fraction * static_cast<double>(m)));
  if (n_train < 1 || n_train >= m)
    throw std::invalid_argument("split leaves an empty train or test set");
  Rng rng(derive_seed(seed, "split"));
  const std::vector<int> perm = random_permutation(m, rng);
  SplitResult out;
  out.train = data.subset({perm.begin(), perm.begin() + n_train});
  out.test = data.subset({perm.begin() + n_train, perm.end()});
  return out;
}

std::string HyperPoint::describe() const {
  std::string s;
  char buf[48];
  const auto add = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%s%s=%g", s.empty() ? "" : " ", key, v);
    s += buf;
  };
  if (capacity) add("C", *capacity);
  if (shrinkage) add("nu", *shrinkage);
  if (subsample) add("subsample", *subsample);
  if (patience) add("patience", static_cast<double>(*patience));
  if (s.empty()) s = "default";
  return s;
}

AlgoSpec AlgoSpec::defaults(const std::string& name, Task task) {
  AlgoSpec spec;
  spec.name = name;
  spec.loss = task == Task::kClassification ? LossKind::kExponential : LossKind::kSquared;

  const std::vector<double> capacity_grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const std::vector<double> shrinkage_grid = {0.01, 0.1, 0.3, 1.0};
  const std::vector<int> patience_grid = {10, 50};

  if (name == "fwboost-c" || name == "fwboost-r" || name == "awaystep" ||
      name == "adaboost-fw") {
    for (double c : capacity_grid) {
      HyperPoint h;
      h.capacity = c;
      spec.grid.push_back(h);
    }
    if (name == "adaboost-fw" || name == "awaystep") spec.step = StepPolicyKind::kLineSearch;
  } else if (name == "gb") {
    spec.grid.push_back(HyperPoint{});
  } else if (name == "gb-shrink") {
    for (double nu : shrinkage_grid) {
      HyperPoint h;
      h.shrinkage = nu;
      spec.grid.push_back(h);
    }
  } else if (name == "gb-sub") {
    HyperPoint h;
    h.subsample = 0.5;
    spec.grid.push_back(h);
  } else if (name == "gb-early") {
    for (int p : patience_grid) {
      HyperPoint h;
      h.patience = p;
      spec.grid.push_back(h);
    }
  } else {
    throw std::invalid_argument("unknown algorithm '" + name + "'");
  }
  return spec;
}

LossModel make_loss(const AlgoSpec& spec, double capacity) {
  LossModel loss;
  loss.kind = spec.loss;
  loss.p = spec.lp_exponent;
  loss.capacity = capacity;
  if (loss.kind == LossKind::kLp && !(loss.p >= 2.0))
    throw std::invalid_argument("lp loss requires p >= 2");
  return loss;
}

FitReport fit_algorithm(const Dataset& train, const AlgoSpec& spec, const HyperPoint& hyper,
                        int iterations, std::uint64_t seed) {
  const double capacity = hyper.capacity.value_or(1.0);
  const LossModel loss = make_loss(spec, capacity);

  if (spec.name == "fwboost-c" || spec.name == "fwboost-r" || spec.name == "awaystep" ||
      spec.name == "adaboost-fw") {
    FitOptions options;
    options.capacity = capacity;
    options.iterations = iterations;
    options.policy.kind = spec.step;
    options.policy.line_search_tol = spec.line_search_tol;
    options.gap_tolerance = spec.gap_tolerance;
    if (spec.name == "adaboost-fw") return run_adaboost_fw(train, options);
    if (spec.name == "awaystep") return run_awaystep(train, loss, spec.atoms, options);
    if (spec.oracle_learner) {
      if (spec.atoms.empty()) throw std::invalid_argument("oracle learner needs an atoms file");
      return run_fwboost(train, loss, make_oracle_subproblem(spec.atoms, train.features),
                         options);
    }
    return spec.name == "fwboost-c" ? run_fwboost_c(train, loss, options)
                                    : run_fwboost_r(train, loss, options);
  }

  BaselineConfig config;
  config.shrinkage = hyper.shrinkage.value_or(1.0);
  config.subsample = hyper.subsample.value_or(1.0);
  config.patience = hyper.patience.value_or(0);
  config.validation_fraction = spec.validation_fraction;
  config.line_search_tol = spec.line_search_tol;
  config.seed = derive_seed(seed, "baseline");
  return run_gradient_boosting(train, loss, config, iterations);
}

namespace {

// Test-metric curve of a fitted model, one entry per recorded iteration.
std::vector<double> metric_curve(const FitReport& report, const Dataset& eval, Metric metric) {
  std::vector<double> curve;
  curve.reserve(report.records.size());
  replay_predictions(report, eval.features, [&](int, const Vector& preds) {
    curve.push_back(evaluate_metric(metric, preds, eval.targets));
  });
  return curve;
}

// Pads a curve to the full horizon by carrying the last value forward
// (same convention as plotting stopped runs flat).
void extend_curve(std::vector<double>& curve, int horizon, double empty_value) {
  if (curve.empty()) curve.push_back(empty_value);
  while (static_cast<int>(curve.size()) < horizon) curve.push_back(curve.back());
}

std::vector<std::vector<int>> make_folds(int m, int folds, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<int> perm = random_permutation(m, rng);
  std::vector<std::vector<int>> out(static_cast<size_t>(folds));
  for (int i = 0; i < m; ++i)
    out[static_cast<size_t>(i % folds)].push_back(perm[static_cast<size_t>(i)]);
  return out;
}

bool folds_have_both_classes(const Dataset& data, const std::vector<std::vector<int>>& folds) {
  for (const auto& fold : folds) {
    bool pos = false, neg = false;
    for (int i : fold) {
      if (data.targets(i) > 0) pos = true;
      else neg = true;
    }
    if (!pos || !neg) return false;
  }
  return true;
}

}  // namespace

HyperPoint cross_validate(const Dataset& train, const AlgoSpec& spec, int folds, int iterations,
                          std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("need at least two folds");
  if (spec.grid.empty()) throw std::invalid_argument("empty tuning grid");
  const int m = static_cast<int>(train.rows());
  if (m < folds) throw std::invalid_argument("fewer rows than folds");

  std::vector<std::vector<int>> assignment = make_folds(m, folds, derive_seed(seed, "folds"));
  if (train.task == Task::kClassification && !folds_have_both_classes(train, assignment)) {
    assignment = make_folds(m, folds, derive_seed(seed, "folds-reshuffle"));
    if (!folds_have_both_classes(train, assignment))
      throw std::runtime_error("a cross-validation fold has a single class");
  }

  const Metric metric = task_metric(train.task);
  const HyperPoint* best = nullptr;
  double best_score = std::numeric_limits<double>::infinity();

  for (size_t g = 0; g < spec.grid.size(); ++g) {
    const HyperPoint& candidate = spec.grid[g];
    std::vector<double> mean_curve(static_cast<size_t>(iterations), 0.0);
    for (int f = 0; f < folds; ++f) {
      std::vector<int> fit_rows;
      for (int k = 0; k < folds; ++k)
        if (k != f)
          fit_rows.insert(fit_rows.end(), assignment[static_cast<size_t>(k)].begin(),
                          assignment[static_cast<size_t>(k)].end());
      const Dataset fold_train = train.subset(fit_rows);
      const Dataset fold_val = train.subset(assignment[static_cast<size_t>(f)]);
      const FitReport report = fit_algorithm(fold_train, spec, candidate, iterations,
                                             derive_seed(seed, "cv-fit", g * 131 + static_cast<size_t>(f)));
      std::vector<double> curve = metric_curve(report, fold_val, metric);
      extend_curve(curve, iterations,
                   evaluate_metric(metric, Vector::Zero(fold_val.rows()), fold_val.targets));
      for (int t = 0; t < iterations; ++t)
        mean_curve[static_cast<size_t>(t)] += curve[static_cast<size_t>(t)];
    }
    double score = std::numeric_limits<double>::infinity();
    for (double v : mean_curve) score = std::min(score, v / static_cast<double>(folds));

    if (score < best_score) {
      best_score = score;
      best = &candidate;
    } else if (score == best_score && best != nullptr && candidate.capacity && best->capacity &&
               *candidate.capacity < *best->capacity) {
      best = &candidate;  // ties prefer the stronger constraint
    }
  }
  return *best;
}

int thread_budget() {
  const char* env = std::getenv("FWBOOST_THREADS");
  int n = env ? std::atoi(env) : 0;
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

namespace {

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct RepeatOutcome {
  bool ok = false;
  std::string error;
  // per algorithm: curves (padded), chosen hyperparameters, raw records, termination
  std::vector<std::vector<double>> train_curves;
  std::vector<std::vector<double>> test_curves;
  std::vector<std::string> chosen;
  std::vector<std::vector<IterationRecord>> records;
  std::vector<std::string> terminations;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CurvePoint aggregate(const std::vector<const std::vector<double>*>& curves, size_t t) {
  CurvePoint point;
  const double n = static_cast<double>(curves.size());
  for (const auto* c : curves) point.mean += (*c)[t];
  point.mean /= n;
  if (curves.size() > 1) {
    double ss = 0.0;
    for (const auto* c : curves) {
      const double d = (*c)[t] - point.mean;
      ss += d * d;
    }
    point.stddev = std::sqrt(ss / (n - 1.0));
  }
  return point;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.repeats < 1) throw std::invalid_argument("need at least one repeat");
  if (config.iterations < 1) throw std::invalid_argument("need at least one iteration");
  if (config.algorithms.empty()) throw std::invalid_argument("no algorithms configured");

  const Dataset data = config.csv_path.empty()
                           ? generate_synthetic(config.synth_name, config.synth,
                                                derive_seed(config.seed, "data"))
                           : load_csv(config.csv_path);

  const Metric metric = task_metric(data.task);
  const size_t n_algos = config.algorithms.size();
  std::vector<RepeatOutcome> outcomes(static_cast<size_t>(config.repeats));

  parallel_for(config.repeats, thread_budget(), [&](int repeat) {
    RepeatOutcome& out = outcomes[static_cast<size_t>(repeat)];
    try {
      const std::uint64_t repeat_seed =
          derive_seed(config.seed, "repeat", static_cast<std::uint64_t>(repeat));
      const SplitResult halves = split(data, config.train_fraction, derive_seed(repeat_seed, "split"));
      for (size_t a = 0; a < n_algos; ++a) {
        const AlgoSpec& spec = config.algorithms[a];
        const HyperPoint chosen =
            cross_validate(halves.train, spec, config.folds, config.iterations,
                           derive_seed(repeat_seed, "cv", a));
        const FitReport report = fit_algorithm(halves.train, spec, chosen, config.iterations,
                                               derive_seed(repeat_seed, "fit", a));
        std::vector<double> train_curve;
        train_curve.reserve(report.records.size());
        for (const auto& rec : report.records) train_curve.push_back(rec.train_risk);
        extend_curve(train_curve, config.iterations, report.initial_risk);

        std::vector<double> test_curve = metric_curve(report, halves.test, metric);
        extend_curve(test_curve, config.iterations,
                     evaluate_metric(metric, Vector::Zero(halves.test.rows()),
                                     halves.test.targets));

        out.train_curves.push_back(std::move(train_curve));
        out.test_curves.push_back(std::move(test_curve));
        out.chosen.push_back(chosen.describe());
        out.records.push_back(report.records);
        out.terminations.push_back(to_string(report.termination));
      }
      out.ok = true;
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
  });

  int completed = 0;
  for (const auto& out : outcomes) {
    if (out.ok)
      ++completed;
    else
      std::cerr << "repeat failed: " << out.error << "\n";
  }
  if (completed == 0) throw std::runtime_error("every repeat failed");

  ExperimentResult result;
  result.completed_repeats = completed;
  for (size_t a = 0; a < n_algos; ++a) {
    AlgoCurves curves;
    curves.algo = config.algorithms[a].name;
    std::vector<const std::vector<double>*> train_refs, test_refs;
    for (const auto& out : outcomes) {
      if (!out.ok) continue;
      train_refs.push_back(&out.train_curves[a]);
      test_refs.push_back(&out.test_curves[a]);
      curves.chosen.push_back(out.chosen[a]);
    }
    curves.train_risk.resize(static_cast<size_t>(config.iterations));
    curves.test_risk.resize(static_cast<size_t>(config.iterations));
    for (int t = 0; t < config.iterations; ++t) {
      curves.train_risk[static_cast<size_t>(t)] = aggregate(train_refs, static_cast<size_t>(t));
      curves.test_risk[static_cast<size_t>(t)] = aggregate(test_refs, static_cast<size_t>(t));
    }
    result.algorithms.push_back(std::move(curves));
  }

  if (!config.output_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);

    {
      std::ofstream records_out(fs::path(config.output_dir) / "records.jsonl");
      for (size_t r = 0; r < outcomes.size(); ++r) {
        const auto& out = outcomes[r];
        if (!out.ok) continue;
        for (size_t a = 0; a < n_algos; ++a) {
          for (size_t k = 0; k < out.records[a].size(); ++k) {
            const IterationRecord& rec = out.records[a][k];
            nlohmann::json line{
                {"run", r},
                {"algo", config.algorithms[a].name},
                {"t", rec.iteration},
                {"train_risk", rec.train_risk},
                {"test_risk", out.test_curves[a][k]},
                {"coefficient_norm", rec.coefficient_norm},
                {"active_set", rec.active_set_size},
                {"step_size", rec.step_size},
                {"step", to_string(rec.step)},
            };
            if (std::isnan(rec.gap))
              line["gap"] = nullptr;
            else
              line["gap"] = rec.gap;
            records_out << line.dump() << "\n";
          }
        }
      }
    }

    {
      std::ofstream curves_out(fs::path(config.output_dir) / "curves.csv");
      curves_out << "algo,iteration,train_risk_mean,train_risk_std,test_risk_mean,test_risk_std\n";
      for (const auto& algo : result.algorithms) {
        for (int t = 0; t < config.iterations; ++t) {
          curves_out << algo.algo << ',' << (t + 1) << ','
                     << format_double(algo.train_risk[static_cast<size_t>(t)].mean) << ','
                     << format_double(algo.train_risk[static_cast<size_t>(t)].stddev) << ','
                     << format_double(algo.test_risk[static_cast<size_t>(t)].mean) << ','
                     << format_double(algo.test_risk[static_cast<size_t>(t)].stddev) << "\n";
        }
      }
    }

    {
      nlohmann::json summary;
      summary["repeats"] = config.repeats;
      summary["completed_repeats"] = completed;
      summary["iterations"] = config.iterations;
      summary["seed"] = config.seed;
      nlohmann::json algos = nlohmann::json::array();
      for (const auto& algo : result.algorithms) {
        double best = std::numeric_limits<double>::infinity();
        int best_t = 1;
        for (int t = 0; t < config.iterations; ++t) {
          const double v = algo.test_risk[static_cast<size_t>(t)].mean;
          if (v < best) {
            best = v;
            best_t = t + 1;
          }
        }
        nlohmann::json entry{
            {"algo", algo.algo},
            {"final_test_risk", algo.test_risk.back().mean},
            {"best_test_risk", best},
            {"best_iteration", best_t},
            {"final_train_risk", algo.train_risk.back().mean},
            {"chosen", algo.chosen},
        };
        algos.push_back(std::move(entry));
      }
      summary["algorithms"] = std::move(algos);
      std::ofstream summary_out(fs::path(config.output_dir) / "summary.json");
      summary_out << summary.dump(2) << "\n";
    }
  }

  return result;
}

}  // namespace fwboost
