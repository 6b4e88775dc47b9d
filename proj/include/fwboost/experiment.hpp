#ifndef FWBOOST_EXPERIMENT_HPP_
#define FWBOOST_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fwboost/solver.hpp"
#include "fwboost/synthetic.hpp"
#include "fwboost/types.hpp"

namespace fwboost {

enum class Metric { kMeanSquaredError, kZeroOneError };

Metric task_metric(Task task);

/// Plain mean squared error, or 0-1 error of sign(pred) with sign(0) = +1.
double evaluate_metric(Metric metric, const Vector& preds, const Vector& targets);

struct SplitResult {
  Dataset train;
  Dataset test;
};

/// Seeded uniform permutation; the train part takes floor(m * fraction) rows.
SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed);

struct HyperPoint {
  std::optional<double> capacity;
  std::optional<double> shrinkage;
  std::optional<double> subsample;
  std::optional<int> patience;
  std::string describe() const;
};

struct AlgoSpec {
  std::string name;  // fwboost-c fwboost-r awaystep adaboost-fw gb gb-shrink gb-sub gb-early
  LossKind loss = LossKind::kSquared;
  double lp_exponent = 2.0;
  StepPolicyKind step = StepPolicyKind::kSchedule;
  double line_search_tol = 1e-10;
  double gap_tolerance = 1e-8;
  double validation_fraction = 0.2;
  std::vector<HyperPoint> grid;
  std::vector<Hypothesis> atoms;  // awaystep and oracle-learner runs
  bool oracle_learner = false;

  /// Canonical spec for an algorithm name: loss defaulted from the task,
  /// tuning grid from the standard geometric grids, line search for the
  /// reweightening classifier and the schedule elsewhere.
  static AlgoSpec defaults(const std::string& name, Task task);
};

LossModel make_loss(const AlgoSpec& spec, double capacity);

FitReport fit_algorithm(const Dataset& train, const AlgoSpec& spec, const HyperPoint& hyper,
                        int iterations, std::uint64_t seed);

/// K-fold cross validation on the training half: for every grid point, the
/// mean validation metric over folds is minimised over the iteration count;
/// exact ties prefer the smaller capacity, then grid order.
HyperPoint cross_validate(const Dataset& train, const AlgoSpec& spec, int folds, int iterations,
                          std::uint64_t seed);

struct ExperimentConfig {
  std::string csv_path;    // either a CSV path ...
  std::string synth_name;  // ... or a bundled generator
  SynthParams synth;
  std::vector<AlgoSpec> algorithms;
  int repeats = 20;
  double train_fraction = 0.5;
  int folds = 5;
  int iterations = 100;
  std::uint64_t seed = 0;
  std::string output_dir;  // empty: keep results in memory only
};

struct CurvePoint {
  double mean = 0.0;
  double stddev = 0.0;
};

struct AlgoCurves {
  std::string algo;
  std::vector<CurvePoint> train_risk;  // per iteration, padded by carrying the last value
  std::vector<CurvePoint> test_risk;
  std::vector<std::string> chosen;  // tuned hyperparameters per repeat
};

struct ExperimentResult {
  std::vector<AlgoCurves> algorithms;
  int completed_repeats = 0;
};

/// Full protocol: per repeat, split, tune by cross validation on the train
/// half, refit on the whole train half, and record per-iteration train risk
/// and test metric. Writes records.jsonl, curves.csv and summary.json when an
/// output directory is configured. Repeats run in parallel (FWBOOST_THREADS
/// caps the worker count, 0 = auto); outputs are written by one aggregator
/// and are byte-stable for a fixed config and seed.
ExperimentResult run_experiment(const ExperimentConfig& config);

int thread_budget();

}  // namespace fwboost

#endif  // FWBOOST_EXPERIMENT_HPP_
