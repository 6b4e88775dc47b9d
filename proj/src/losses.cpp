#include "fwboost/losses.hpp"

#include <cmath>

namespace fwboost {

namespace {

// log(1 + exp(z)) without overflow for large |z|.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

void check_pair(const LossModel& loss, const Vector& preds, const Vector& targets) {
  if (preds.size() != targets.size())
    throw std::invalid_argument("prediction and target lengths differ");
  if (loss.needs_sign_targets()) {
    for (Index i = 0; i < targets.size(); ++i) {
      if (targets(i) != 1.0 && targets(i) != -1.0)
        throw std::invalid_argument("margin losses require targets in {-1,+1}");
    }
  }
}

}  // namespace

LossModel LossModel::squared(double capacity) { return LossModel{LossKind::kSquared, 2.0, capacity}; }

LossModel LossModel::lp(double p, double capacity) {
  if (!(p >= 2.0)) throw std::invalid_argument("lp loss requires p >= 2");
  return LossModel{LossKind::kLp, p, capacity};
}

LossModel LossModel::exponential(double capacity) {
  return LossModel{LossKind::kExponential, 2.0, capacity};
}

LossModel LossModel::logistic(double capacity) {
  return LossModel{LossKind::kLogistic, 2.0, capacity};
}

double LossModel::value(double a, double y) const {
  switch (kind) {
    case LossKind::kSquared: {
      const double d = a - y;
      return 0.5 * d * d;
    }
    case LossKind::kLp:
      return std::pow(std::abs(a - y), p) / p;
    case LossKind::kExponential:
      return std::exp(-y * a);
    case LossKind::kLogistic:
      return softplus(-y * a);
  }
  throw std::logic_error("unknown loss kind");
}

double LossModel::derivative(double a, double y) const {
  switch (kind) {
    case LossKind::kSquared:
      return a - y;
    case LossKind::kLp: {
      const double d = a - y;
      if (d == 0.0) return 0.0;
      return std::copysign(std::pow(std::abs(d), p - 1.0), d);
    }
    case LossKind::kExponential:
      return -y * std::exp(-y * a);
    case LossKind::kLogistic:
      // -y * sigmoid(-y a)
      return -y / (1.0 + std::exp(y * a));
  }
  throw std::logic_error("unknown loss kind");
}

double empirical_risk(const LossModel& loss, const Vector& preds, const Vector& targets) {
  check_pair(loss, preds, targets);
  double sum = 0.0;
  for (Index i = 0; i < preds.size(); ++i) sum += loss.value(preds(i), targets(i));
  return sum / static_cast<double>(preds.size());
}

Vector negative_gradient(const LossModel& loss, const Vector& preds, const Vector& targets) {
  check_pair(loss, preds, targets);
  const double inv_m = 1.0 / static_cast<double>(preds.size());
  Vector r(preds.size());
  for (Index i = 0; i < preds.size(); ++i) r(i) = -inv_m * loss.derivative(preds(i), targets(i));
  return r;
}

double smoothness_constant(const LossModel& loss) {
  const double c = loss.capacity;
  switch (loss.kind) {
    case LossKind::kSquared:
      return (2.0 - 1.0) * (2.0 * c) * (2.0 * c);
    case LossKind::kLp:
      return (loss.p - 1.0) * std::pow(2.0 * c, loss.p);
    case LossKind::kExponential:
      return 4.0 * c * c * std::exp(c);
    case LossKind::kLogistic:
      return c * c;
  }
  throw std::logic_error("unknown loss kind");
}

LipschitzBound lipschitz_and_bound(const LossModel& loss, std::optional<double> target_bound) {
  const double c = loss.capacity;
  switch (loss.kind) {
    case LossKind::kSquared:
    case LossKind::kLp: {
      if (!target_bound)
        throw std::invalid_argument("lp losses need an explicit target bound for their constants");
      const double reach = c + std::abs(*target_bound);
      return {std::pow(reach, loss.p - 1.0), std::pow(reach, loss.p) / loss.p};
    }
    case LossKind::kExponential:
      return {std::exp(c), std::exp(c)};
    case LossKind::kLogistic:
      return {1.0, softplus(c)};
  }
  throw std::logic_error("unknown loss kind");
}

}  // namespace fwboost
