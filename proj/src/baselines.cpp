#include "fwboost/baselines.hpp"

#include <cmath>

#include "fwboost/rng.hpp"

namespace fwboost {

namespace {

// Unbounded exact line search over alpha >= 0: bracket by doubling, then
// bisect the (monotone) derivative. The doubling cap only matters for
// separable exponential-loss problems where the optimum runs off to infinity.
double open_line_search(const LossModel& loss, const Vector& preds, const Vector& direction,
                        const Vector& targets, double tol) {
  const auto slope = [&](double alpha) {
    double s = 0.0;
    for (Index i = 0; i < preds.size(); ++i)
      s += loss.derivative(preds(i) + alpha * direction(i), targets(i)) * direction(i);
    return s / static_cast<double>(preds.size());
  };
  if (slope(0.0) >= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  constexpr double kMaxStep = 1e6;
  while (slope(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi >= kMaxStep) return kMaxStep;
  }
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void BaselineConfig::validate() const {
  if (!(shrinkage > 0.0 && shrinkage <= 1.0))
    throw std::invalid_argument("shrinkage must lie in (0,1]");
  if (!(subsample > 0.0 && subsample <= 1.0))
    throw std::invalid_argument("subsample fraction must lie in (0,1]");
  if (patience < 0) throw std::invalid_argument("patience must be nonnegative");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    throw std::invalid_argument("validation fraction must lie in (0,1)");
}

FitReport run_gradient_boosting(const Dataset& data, const LossModel& loss,
                                const BaselineConfig& config, int iterations) {
  config.validate();
  data.validate();
  if (iterations < 1) throw std::invalid_argument("need at least one iteration");

  // Early stopping monitors a held-out slice carved off before any fitting.
  std::vector<int> fit_rows;
  std::vector<int> val_rows;
  const int m_all = static_cast<int>(data.rows());
  if (config.patience > 0) {
    Rng rng(derive_seed(config.seed, "gb-validation"));
    const std::vector<int> perm = random_permutation(m_all, rng);
    int n_val = static_cast<int>(std::floor(config.validation_fraction * m_all));
    n_val = std::max(1, std::min(n_val, m_all - 1));
    val_rows.assign(perm.begin(), perm.begin() + n_val);
    fit_rows.assign(perm.begin() + n_val, perm.end());
  } else {
    fit_rows.resize(static_cast<size_t>(m_all));
    for (int i = 0; i < m_all; ++i) fit_rows[static_cast<size_t>(i)] = i;
  }

  const Dataset fit = config.patience > 0 ? data.subset(fit_rows) : data;
  const Dataset val = config.patience > 0 ? data.subset(val_rows) : Dataset{};
  const Index m = fit.rows();

  FitReport report;
  report.ensemble = Ensemble(std::numeric_limits<double>::infinity());
  Vector preds = Vector::Zero(m);
  Vector val_preds = config.patience > 0 ? Vector::Zero(val.rows()) : Vector{};
  report.initial_risk = empirical_risk(loss, preds, fit.targets);
  report.termination = TerminationReason::kMaxIterations;

  const StumpFitter full_fitter(fit.features);
  Rng subsample_rng(derive_seed(config.seed, "gb-subsample"));

  double best_val = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (int t = 1; t <= iterations; ++t) {
    const Vector residual = negative_gradient(loss, preds, fit.targets);

    Hypothesis h;
    if (config.subsample < 1.0) {
      const int k = static_cast<int>(std::floor(config.subsample * static_cast<double>(m)));
      if (k < 2) throw std::invalid_argument("subsample too small to fit a stump");
      const std::vector<int> perm = random_permutation(static_cast<int>(m), subsample_rng);
      std::vector<int> rows(perm.begin(), perm.begin() + k);
      const Dataset sub = fit.subset(rows);
      Vector sub_residual(k);
      for (int i = 0; i < k; ++i) sub_residual(i) = residual(rows[static_cast<size_t>(i)]);
      if (loss.kind == LossKind::kExponential) {
        if (sub_residual.lpNorm<1>() == 0.0) {
          report.termination = TerminationReason::kZeroDirection;
          break;
        }
        const Reduction red = reduce_to_classification(sub_residual);
        h = train_stump_classifier(sub, red.weights, red.labels);
      } else {
        h = train_regression_stump(sub, Vector(static_cast<double>(m) * sub_residual));
      }
    } else {
      if (loss.kind == LossKind::kExponential) {
        if (residual.lpNorm<1>() == 0.0) {
          report.termination = TerminationReason::kZeroDirection;
          break;
        }
        const Reduction red = reduce_to_classification(residual);
        h = full_fitter.fit_classifier(red.weights, red.labels);
      } else {
        h = full_fitter.fit_regression(Vector(static_cast<double>(m) * residual));
      }
    }

    const Vector h_preds = h.evaluate(fit.features);
    if (h_preds.cwiseAbs().maxCoeff() == 0.0) {
      report.termination = TerminationReason::kZeroDirection;
      break;
    }
    const double raw_step =
        open_line_search(loss, preds, h_preds, fit.targets, config.line_search_tol);
    const double step = config.shrinkage * raw_step;
    report.ensemble.append(step, h);
    preds += step * h_preds;

    IterationRecord rec;
    rec.iteration = t;
    rec.step = StepKind::kAdditive;
    rec.atom_index = static_cast<int>(report.ensemble.size()) - 1;
    rec.step_size = step;
    rec.train_risk = empirical_risk(loss, preds, fit.targets);
    rec.coefficient_norm = report.ensemble.coefficient_norm();
    rec.active_set_size = static_cast<int>(report.ensemble.active_set().size());
    report.records.push_back(rec);

    if (config.patience > 0) {
      val_preds += step * h.evaluate(val.features);
      const double val_risk = empirical_risk(loss, val_preds, val.targets);
      if (val_risk < best_val) {
        best_val = val_risk;
        stall = 0;
      } else if (++stall >= config.patience) {
        report.termination = TerminationReason::kEarlyStopped;
        break;
      }
    }
  }
  return report;
}

}  // namespace fwboost
