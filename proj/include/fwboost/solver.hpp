#ifndef FWBOOST_SOLVER_HPP_
#define FWBOOST_SOLVER_HPP_

#include <functional>
#include <limits>
#include <vector>

#include "fwboost/ensemble.hpp"
#include "fwboost/losses.hpp"
#include "fwboost/stumps.hpp"
#include "fwboost/types.hpp"

namespace fwboost {

enum class StepPolicyKind { kSchedule, kLineSearch };

struct StepPolicy {
  StepPolicyKind kind = StepPolicyKind::kSchedule;
  double line_search_tol = 1e-10;

  static StepPolicy schedule() { return {StepPolicyKind::kSchedule, 1e-10}; }
  static StepPolicy line_search(double tol = 1e-10) { return {StepPolicyKind::kLineSearch, tol}; }
};

/// Classic step schedule 2/(t+2) for iteration t >= 1.
double step_schedule(int t);

/// Minimiser of gamma -> L(preds + gamma * direction) over [0, upper] for a
/// convex loss, found by bisection on the derivative; returns exactly 0 or
/// exactly `upper` when the derivative keeps one sign on the interval.
double line_search(const LossModel& loss, const Vector& preds, const Vector& direction,
                   const Vector& targets, double tol, double upper = 1.0);

struct Reduction {
  Vector labels;   // sign(r_i), sign(0) = +1
  Vector weights;  // |r_i| / ||r||_1
};

/// Turns a residual direction into a weighted classification problem.
/// Throws when the direction is identically zero (callers treat that as
/// convergence).
Reduction reduce_to_classification(const Vector& residual);

struct ScaledHypothesis {
  Hypothesis hypothesis;  // rescaled so max_i |h(x_i)| = 1 on the given rows
  double scale = 0.0;     // the measured l-infinity norm of the input
  bool zero = false;      // input evaluated to zero everywhere
};

/// Normalises a real-valued hypothesis onto the unit l-infinity ball, taking
/// the norm over training-set evaluations.
ScaledHypothesis scale_to_linf_ball(const Hypothesis& hypothesis, const Matrix& x);

/// <vertex - current, r>: certificate that upper-bounds the current
/// suboptimality when the vertex solves the linearised subproblem exactly.
double fw_gap(const Vector& residual, const Vector& vertex_preds, const Vector& current_preds);

enum class StepKind { kFrankWolfe, kAway, kDrop, kAdditive };
enum class TerminationReason { kMaxIterations, kGapBelowTolerance, kZeroDirection, kEarlyStopped };

const char* to_string(StepKind kind);
const char* to_string(TerminationReason reason);

struct IterationRecord {
  int iteration = 0;  // 1-based
  StepKind step = StepKind::kFrankWolfe;
  int atom_index = -1;       // into the report ensemble's atom list
  double step_size = 0.0;    // gamma, or the applied coefficient for additive steps
  double train_risk = 0.0;   // empirical risk after the update
  double gap = std::numeric_limits<double>::quiet_NaN();  // certificate at the pre-step iterate
  double coefficient_norm = 0.0;
  int active_set_size = 0;
};

struct FitReport {
  Ensemble ensemble;
  double initial_risk = 0.0;
  TerminationReason termination = TerminationReason::kMaxIterations;
  std::vector<IterationRecord> records;
  // Filled only when tracing is requested (algorithm-equivalence checks).
  std::vector<Vector> weight_trace;
  std::vector<std::vector<double>> coefficient_trace;
};

struct SubproblemResult {
  Hypothesis hypothesis;  // in the unit l-infinity ball
  Vector predictions;     // hypothesis evaluated on the training rows
  bool zero_direction = false;
};

/// Solves argmax_h <h, r> over the caller's hypothesis class, at least
/// approximately. The iteration index is passed through for solvers that
/// inject iteration-dependent tolerances.
using SubproblemSolver = std::function<SubproblemResult(const Vector& residual, int iteration)>;

struct StepContext {
  int iteration;
  const Vector& residual;
  const SubproblemResult& vertex;
  double gamma;
  const Ensemble& ensemble;
};

struct FitOptions {
  double capacity = 1.0;
  int iterations = 100;
  StepPolicy policy{};
  double gap_tolerance = 1e-8;
  bool trace = false;
  std::function<void(const StepContext&)> on_step;  // after each applied update
};

/// Generic l1-constrained boosting loop: at each round, follow the direction
/// from the current ensemble towards capacity * (subproblem maximiser).
FitReport run_fwboost(const Dataset& data, const LossModel& loss,
                      const SubproblemSolver& subproblem, const FitOptions& options);

/// Subproblem via the weighted-classification reduction on +-1 stumps.
FitReport run_fwboost_c(const Dataset& data, const LossModel& loss, const FitOptions& options);

/// Subproblem via least-squares regression stumps, rescaled onto the unit
/// l-infinity ball.
FitReport run_fwboost_r(const Dataset& data, const LossModel& loss, const FitOptions& options);

/// Away-step variant over an explicit finite atom list: each round either
/// moves towards the best vertex or shrinks the worst active atom, possibly
/// dropping it. Steps are chosen by line search on both branches.
FitReport run_awaystep(const Dataset& data, const LossModel& loss,
                       const std::vector<Hypothesis>& atoms, const FitOptions& options);

/// Exact subproblem over an explicit atom list (list-order tie-break,
/// matching best_inner_product_oracle).
SubproblemSolver make_oracle_subproblem(const std::vector<Hypothesis>& atoms, const Matrix& x);

/// Replays the recorded step sequence on arbitrary rows, invoking
/// visit(t, predictions) after each step.
void replay_predictions(const FitReport& report, const Matrix& x,
                        const std::function<void(int, const Vector&)>& visit);

}  // namespace fwboost

#endif  // FWBOOST_SOLVER_HPP_
