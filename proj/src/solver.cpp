#include "fwboost/solver.hpp"

#include <cmath>

namespace fwboost {

double step_schedule(int t) {
  if (t < 1) throw std::invalid_argument("iteration index must be at least 1");
  return 2.0 / (static_cast<double>(t) + 2.0);
}

double line_search(const LossModel& loss, const Vector& preds, const Vector& direction,
                   const Vector& targets, double tol, double upper) {
  if (!direction.allFinite()) throw std::invalid_argument("line search direction is not finite");
  if (!(tol > 0.0)) throw std::invalid_argument("line search tolerance must be positive");
  if (!(upper > 0.0)) return 0.0;

  const auto slope = [&](double gamma) {
    double s = 0.0;
    for (Index i = 0; i < preds.size(); ++i)
      s += loss.derivative(preds(i) + gamma * direction(i), targets(i)) * direction(i);
    return s / static_cast<double>(preds.size());
  };

  if (slope(0.0) >= 0.0) return 0.0;
  if (slope(upper) <= 0.0) return upper;
  double lo = 0.0, hi = upper;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Reduction reduce_to_classification(const Vector& residual) {
  const double norm = residual.lpNorm<1>();
  if (norm == 0.0) throw std::invalid_argument("cannot reduce an all-zero residual");
  Reduction out;
  out.labels.resize(residual.size());
  out.weights.resize(residual.size());
  for (Index i = 0; i < residual.size(); ++i) {
    out.labels(i) = residual(i) < 0.0 ? -1.0 : 1.0;
    out.weights(i) = std::abs(residual(i)) / norm;
  }
  return out;
}

ScaledHypothesis scale_to_linf_ball(const Hypothesis& hypothesis, const Matrix& x) {
  const Vector values = hypothesis.evaluate(x);
  const double norm = values.cwiseAbs().maxCoeff();
  if (norm == 0.0) return {hypothesis, 0.0, true};
  Hypothesis scaled = hypothesis;
  scaled.left /= norm;
  scaled.right /= norm;
  return {scaled, norm, false};
}

double fw_gap(const Vector& residual, const Vector& vertex_preds, const Vector& current_preds) {
  if (residual.size() != vertex_preds.size() || residual.size() != current_preds.size())
    throw std::invalid_argument("gap inputs must have equal lengths");
  return (vertex_preds - current_preds).dot(residual);
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kFrankWolfe: return "fw";
    case StepKind::kAway: return "away";
    case StepKind::kDrop: return "drop";
    case StepKind::kAdditive: return "additive";
  }
  return "?";
}

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kMaxIterations: return "max-iters";
    case TerminationReason::kGapBelowTolerance: return "gap-below-tol";
    case TerminationReason::kZeroDirection: return "zero-direction";
    case TerminationReason::kEarlyStopped: return "early-stopped";
  }
  return "?";
}

namespace {

void validate_options(const FitOptions& options) {
  if (options.iterations < 1) throw std::invalid_argument("need at least one iteration");
  if (!(options.capacity > 0.0)) throw std::invalid_argument("capacity must be positive");
}

}  // namespace

FitReport run_fwboost(const Dataset& data, const LossModel& loss,
                      const SubproblemSolver& subproblem, const FitOptions& options) {
  validate_options(options);
  data.validate();
  const Index m = data.rows();

  FitReport report;
  report.ensemble = Ensemble(options.capacity);
  report.records.reserve(options.iterations);
  Vector preds = Vector::Zero(m);
  report.initial_risk = empirical_risk(loss, preds, data.targets);
  report.termination = TerminationReason::kMaxIterations;

  for (int t = 1; t <= options.iterations; ++t) {
    const Vector residual = negative_gradient(loss, preds, data.targets);
    const SubproblemResult vertex = subproblem(residual, t);
    if (vertex.zero_direction) {
      report.termination = TerminationReason::kZeroDirection;
      break;
    }
    const Vector vertex_preds = options.capacity * vertex.predictions;
    const double gap = fw_gap(residual, vertex_preds, preds);
    if (gap <= options.gap_tolerance) {
      report.termination = TerminationReason::kGapBelowTolerance;
      break;
    }
    const Vector direction = vertex_preds - preds;
    const double gamma = options.policy.kind == StepPolicyKind::kSchedule
                             ? step_schedule(t)
                             : line_search(loss, preds, direction, data.targets,
                                           options.policy.line_search_tol);
    fw_update(report.ensemble, vertex.hypothesis, gamma);
    preds = (1.0 - gamma) * preds + gamma * vertex_preds;

    IterationRecord rec;
    rec.iteration = t;
    rec.step = StepKind::kFrankWolfe;
    rec.atom_index = static_cast<int>(report.ensemble.size()) - 1;
    rec.step_size = gamma;
    rec.train_risk = empirical_risk(loss, preds, data.targets);
    rec.gap = gap;
    rec.coefficient_norm = report.ensemble.coefficient_norm();
    rec.active_set_size = static_cast<int>(report.ensemble.active_set().size());
    report.records.push_back(rec);

    if (options.trace)
      report.coefficient_trace.push_back(report.ensemble.coefficients());
    if (options.on_step)
      options.on_step(StepContext{t, residual, vertex, gamma, report.ensemble});
  }
  return report;
}

FitReport run_fwboost_c(const Dataset& data, const LossModel& loss, const FitOptions& options) {
  const StumpFitter fitter(data.features);
  const SubproblemSolver solve = [&fitter](const Vector& residual, int) -> SubproblemResult {
    if (residual.lpNorm<1>() == 0.0) return {Hypothesis{}, Vector{}, true};
    const Reduction reduction = reduce_to_classification(residual);
    Hypothesis h = fitter.fit_classifier(reduction.weights, reduction.labels);
    Vector values = h.evaluate(fitter.features());
    return {h, std::move(values), false};
  };

  if (!options.trace) return run_fwboost(data, loss, solve, options);

  // The reduction weights are this solver's sample distribution; recomputing
  // them from the stored residual reproduces bit-for-bit what the learner saw.
  std::vector<Vector> weights;
  FitOptions traced = options;
  auto downstream = options.on_step;
  traced.on_step = [&weights, downstream](const StepContext& ctx) {
    weights.push_back(reduce_to_classification(ctx.residual).weights);
    if (downstream) downstream(ctx);
  };
  FitReport report = run_fwboost(data, loss, solve, traced);
  report.weight_trace = std::move(weights);
  return report;
}

FitReport run_fwboost_r(const Dataset& data, const LossModel& loss, const FitOptions& options) {
  const StumpFitter fitter(data.features);
  const SubproblemSolver solve = [&fitter](const Vector& residual, int) -> SubproblemResult {
    const Hypothesis raw = fitter.fit_regression(residual);
    const ScaledHypothesis scaled = scale_to_linf_ball(raw, fitter.features());
    if (scaled.zero) return {Hypothesis{}, Vector{}, true};
    Vector values = scaled.hypothesis.evaluate(fitter.features());
    return {scaled.hypothesis, std::move(values), false};
  };
  return run_fwboost(data, loss, solve, options);
}

SubproblemSolver make_oracle_subproblem(const std::vector<Hypothesis>& atoms, const Matrix& x) {
  if (atoms.empty()) throw std::invalid_argument("oracle needs a nonempty atom list");
  Matrix values(static_cast<Index>(atoms.size()), x.rows());
  for (size_t j = 0; j < atoms.size(); ++j)
    values.row(static_cast<Index>(j)) = atoms[j].evaluate(x).transpose();
  return [atoms, values](const Vector& residual, int) -> SubproblemResult {
    Index best = 0;
    double best_dot = values.row(0).dot(residual);
    for (Index j = 1; j < values.rows(); ++j) {
      const double dot = values.row(j).dot(residual);
      if (dot > best_dot) {
        best_dot = dot;
        best = j;
      }
    }
    return {atoms[static_cast<size_t>(best)], values.row(best).transpose(), false};
  };
}

FitReport run_awaystep(const Dataset& data, const LossModel& loss,
                       const std::vector<Hypothesis>& atoms, const FitOptions& options) {
  validate_options(options);
  data.validate();
  if (atoms.empty()) throw std::invalid_argument("away-step solver needs a nonempty atom list");
  const Index m = data.rows();
  const double capacity = options.capacity;

  Matrix atom_preds(static_cast<Index>(atoms.size()), m);
  for (size_t j = 0; j < atoms.size(); ++j)
    atom_preds.row(static_cast<Index>(j)) = atoms[j].evaluate(data.features).transpose();

  FitReport report;
  report.ensemble = Ensemble(capacity);
  Vector preds = Vector::Zero(m);
  report.initial_risk = empirical_risk(loss, preds, data.targets);
  report.termination = TerminationReason::kMaxIterations;

  // Prediction rows for the ensemble's (append-only) entries.
  std::vector<Vector> entry_preds;
  std::vector<size_t> entry_atom;

  for (int t = 1; t <= options.iterations; ++t) {
    const Vector residual = negative_gradient(loss, preds, data.targets);

    Index best = 0;
    double best_dot = atom_preds.row(0).dot(residual);
    for (Index j = 1; j < atom_preds.rows(); ++j) {
      const double dot = atom_preds.row(j).dot(residual);
      if (dot > best_dot) {
        best_dot = dot;
        best = j;
      }
    }
    const Vector fw_vertex = capacity * atom_preds.row(best).transpose();
    const double gap_fw = fw_gap(residual, fw_vertex, preds);
    if (gap_fw <= options.gap_tolerance) {
      report.termination = TerminationReason::kGapBelowTolerance;
      break;
    }

    int away_entry = -1;
    double away_dot = std::numeric_limits<double>::infinity();
    for (int j : report.ensemble.active_set()) {
      const double dot = entry_preds[static_cast<size_t>(j)].dot(residual);
      if (dot < away_dot) {
        away_dot = dot;
        away_entry = j;
      }
    }
    double gap_away = -std::numeric_limits<double>::infinity();
    if (away_entry >= 0)
      gap_away = fw_gap(residual, preds, capacity * entry_preds[static_cast<size_t>(away_entry)]);
    // fw_gap(r, preds, C h_min) = <preds - C h_min, r>, the away direction's alignment.

    const bool take_fw = t == 1 || away_entry < 0 || gap_fw >= gap_away;

    IterationRecord rec;
    rec.iteration = t;
    rec.gap = gap_fw;

    if (take_fw) {
      const Vector direction = fw_vertex - preds;
      const double gamma =
          line_search(loss, preds, direction, data.targets, options.policy.line_search_tol, 1.0);
      fw_update(report.ensemble, atoms[static_cast<size_t>(best)], gamma);
      entry_preds.push_back(atom_preds.row(best).transpose());
      entry_atom.push_back(static_cast<size_t>(best));
      preds = (1.0 - gamma) * preds + gamma * fw_vertex;
      rec.step = StepKind::kFrankWolfe;
      rec.atom_index = static_cast<int>(report.ensemble.size()) - 1;
      rec.step_size = gamma;
    } else {
      const Vector away_vertex = capacity * entry_preds[static_cast<size_t>(away_entry)];
      const Vector direction = preds - away_vertex;
      const double cap = away_step_cap(report.ensemble, away_entry);
      const double upper = std::min(1.0, cap);
      const double gamma =
          line_search(loss, preds, direction, data.targets, options.policy.line_search_tol, upper);
      away_update(report.ensemble, away_entry, gamma);
      preds = (1.0 + gamma) * preds - gamma * away_vertex;
      rec.step = gamma == cap ? StepKind::kDrop : StepKind::kAway;
      rec.atom_index = away_entry;
      rec.step_size = gamma;
    }

    rec.train_risk = empirical_risk(loss, preds, data.targets);
    rec.coefficient_norm = report.ensemble.coefficient_norm();
    rec.active_set_size = static_cast<int>(report.ensemble.active_set().size());
    report.records.push_back(rec);
    if (options.trace) report.coefficient_trace.push_back(report.ensemble.coefficients());
  }
  return report;
}

void replay_predictions(const FitReport& report, const Matrix& x,
                        const std::function<void(int, const Vector&)>& visit) {
  Vector preds = Vector::Zero(x.rows());
  const double capacity = report.ensemble.capacity();
  for (const IterationRecord& rec : report.records) {
    const Vector values = report.ensemble.atom(rec.atom_index).evaluate(x);
    switch (rec.step) {
      case StepKind::kFrankWolfe:
        preds = (1.0 - rec.step_size) * preds + rec.step_size * capacity * values;
        break;
      case StepKind::kAway:
      case StepKind::kDrop:
        preds = (1.0 + rec.step_size) * preds - rec.step_size * capacity * values;
        break;
      case StepKind::kAdditive:
        preds += rec.step_size * values;
        break;
    }
    visit(rec.iteration, preds);
  }
}

}  // namespace fwboost
