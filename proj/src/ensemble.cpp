#include "fwboost/ensemble.hpp"

#include <algorithm>
#include <cmath>

namespace fwboost {

void Dataset::validate() const {
  if (rows() < 1 || cols() < 1) throw std::invalid_argument("dataset needs at least one row and one column");
  if (targets.size() != rows()) throw std::invalid_argument("target length does not match feature rows");
  if (!features.allFinite() || !targets.allFinite())
    throw std::invalid_argument("dataset contains non-finite values");
  if (task == Task::kClassification) {
    for (Index i = 0; i < targets.size(); ++i) {
      if (targets(i) != 1.0 && targets(i) != -1.0)
        throw std::invalid_argument("classification targets must be exactly -1 or +1");
    }
  }
}

Dataset Dataset::subset(const std::vector<int>& indices) const {
  Dataset out;
  out.task = task;
  out.features.resize(static_cast<Index>(indices.size()), cols());
  out.targets.resize(static_cast<Index>(indices.size()));
  for (size_t k = 0; k < indices.size(); ++k) {
    out.features.row(static_cast<Index>(k)) = features.row(indices[k]);
    out.targets(static_cast<Index>(k)) = targets(indices[k]);
  }
  return out;
}

bool operator==(const Hypothesis& a, const Hypothesis& b) {
  return a.kind == b.kind && a.feature == b.feature && a.threshold == b.threshold &&
         a.left == b.left && a.right == b.right;
}

Ensemble::Ensemble(double capacity) : capacity_(capacity) {
  if (!(capacity > 0.0)) throw std::invalid_argument("ensemble capacity must be positive");
}

double Ensemble::coefficient_norm_exact() const {
  double sum = 0.0;
  for (double c : coefficients_) sum += std::abs(c);
  return sum;
}

void Ensemble::append(double coefficient, const Hypothesis& hypothesis) {
  if (coefficient < -1e-12) throw std::invalid_argument("negative coefficient");
  atoms_.push_back(hypothesis);
  coefficients_.push_back(coefficient);
  if (coefficient > 0.0) active_.push_back(static_cast<int>(atoms_.size()) - 1);
  norm_ += std::abs(coefficient);
  check_invariants();
}

void Ensemble::check_invariants() const {
  if (norm_ > capacity_ + kFeasibilityTolerance)
    throw std::logic_error("ensemble left the l1 ball: norm " + std::to_string(norm_) +
                           " exceeds capacity " + std::to_string(capacity_));
}

void fw_update(Ensemble& e, const Hypothesis& hypothesis, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("fw step size must lie in [0,1]");
  const double keep = 1.0 - gamma;
  if (gamma == 1.0) {
    std::fill(e.coefficients_.begin(), e.coefficients_.end(), 0.0);
    e.active_.clear();
    e.norm_ = 0.0;
  } else if (gamma > 0.0) {
    for (double& c : e.coefficients_) c *= keep;
    e.norm_ *= keep;
  }
  const double added = gamma * e.capacity_;
  e.atoms_.push_back(hypothesis);
  e.coefficients_.push_back(added);
  if (added > 0.0) e.active_.push_back(static_cast<int>(e.atoms_.size()) - 1);
  e.norm_ += added;
  e.check_invariants();
}

double away_step_cap(const Ensemble& e, int away_index) {
  const auto& active = e.active_set();
  if (std::find(active.begin(), active.end(), away_index) == active.end())
    throw std::invalid_argument("away index is not in the active set");
  const double alpha = e.coefficient(away_index);
  if (alpha >= e.capacity())
    throw std::domain_error("away step undefined: atom saturates the full capacity");
  return alpha / (e.capacity() - alpha);
}

void away_update(Ensemble& e, int away_index, double gamma) {
  const double cap = away_step_cap(e, away_index);  // also validates the index
  if (!(gamma >= 0.0)) throw std::invalid_argument("away step size must be nonnegative");
  if (gamma > cap) throw std::invalid_argument("away step size exceeds the drop cap");
  if (gamma == 0.0) return;
  const double grow = 1.0 + gamma;
  for (double& c : e.coefficients_) c *= grow;
  e.norm_ = grow * e.norm_ - gamma * e.capacity_;
  double& away = e.coefficients_[away_index];
  away -= gamma * e.capacity_;
  if (gamma == cap) {
    // Drop step: clear the residual rounding so the atom leaves exactly.
    e.norm_ -= away;
    away = 0.0;
    e.active_.erase(std::remove(e.active_.begin(), e.active_.end(), away_index), e.active_.end());
  } else if (away < -1e-12) {
    throw std::logic_error("away update drove a coefficient negative");
  }
  e.check_invariants();
}

Vector predict(const Ensemble& ensemble, const Matrix& x) {
  Vector out = Vector::Zero(x.rows());
  for (int j : ensemble.active_set())
    out += ensemble.coefficient(j) * ensemble.atom(j).evaluate(x);
  return out;
}

Vector predict(const Ensemble& ensemble, const Dataset& data) {
  return predict(ensemble, data.features);
}

}  // namespace fwboost
