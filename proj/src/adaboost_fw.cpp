#include "fwboost/adaboost_fw.hpp"

#include <cmath>

namespace fwboost {

namespace {

double log_sum_exp(const Vector& v) {
  const double top = v.maxCoeff();
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (Index i = 0; i < v.size(); ++i) sum += std::exp(v(i) - top);
  return top + std::log(sum);
}

}  // namespace

DistributionWeights DistributionWeights::uniform(Index m) {
  DistributionWeights d;
  d.log_weights = Vector::Constant(m, -std::log(static_cast<double>(m)));
  return d;
}

Vector DistributionWeights::weights() const {
  // std::exp maps -inf to an exact zero; Eigen's packet exp does not.
  Vector w(log_weights.size());
  for (Index i = 0; i < log_weights.size(); ++i) w(i) = std::exp(log_weights(i));
  return w;
}

void DistributionWeights::normalize() {
  const double z = log_sum_exp(log_weights);
  log_weights.array() -= z;
}

DistributionWeights update_distribution(const DistributionWeights& d, double gamma,
                                        double capacity, const Vector& hypothesis_preds,
                                        const Vector& labels) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
  if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be positive");
  if (hypothesis_preds.size() != d.log_weights.size() || labels.size() != d.log_weights.size())
    throw std::invalid_argument("distribution update length mismatch");
  DistributionWeights out;
  out.log_weights.resize(d.log_weights.size());
  const double keep = 1.0 - gamma;
  for (Index i = 0; i < d.log_weights.size(); ++i) {
    // (1-gamma)*log D avoids 0 * (-inf) when gamma == 1: the old weight drops
    // out of the update entirely.
    const double carried = gamma == 1.0 ? 0.0 : keep * d.log_weights(i);
    out.log_weights(i) = carried - gamma * capacity * labels(i) * hypothesis_preds(i);
  }
  out.normalize();
  return out;
}

FitReport run_adaboost_fw(const Dataset& data, const FitOptions& options) {
  if (data.task != Task::kClassification)
    throw std::invalid_argument("adaboost-fw needs a classification dataset");
  data.validate();
  if (options.iterations < 1) throw std::invalid_argument("need at least one iteration");
  if (!(options.capacity > 0.0)) throw std::invalid_argument("capacity must be positive");

  const Index m = data.rows();
  const LossModel loss = LossModel::exponential(options.capacity);
  const StumpFitter fitter(data.features);

  FitReport report;
  report.ensemble = Ensemble(options.capacity);
  Vector preds = Vector::Zero(m);
  report.initial_risk = empirical_risk(loss, preds, data.targets);
  report.termination = TerminationReason::kMaxIterations;

  DistributionWeights dist = DistributionWeights::uniform(m);

  for (int t = 1; t <= options.iterations; ++t) {
    const Vector weights = dist.weights();
    const double drift = std::abs(weights.sum() - 1.0);
    if (drift > 1e-9) throw std::logic_error("sample distribution drifted off the simplex");

    const Hypothesis h = fitter.fit_classifier(weights, data.targets);
    const Vector h_preds = h.evaluate(data.features);
    const Vector vertex_preds = options.capacity * h_preds;

    // Same certificate as the generic solver, taken against the stump class.
    const Vector residual = negative_gradient(loss, preds, data.targets);
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

    dist = update_distribution(dist, gamma, options.capacity, h_preds, data.targets);
    fw_update(report.ensemble, h, gamma);
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

    if (options.trace) {
      report.weight_trace.push_back(weights);
      report.coefficient_trace.push_back(report.ensemble.coefficients());
    }
  }
  return report;
}

}  // namespace fwboost
