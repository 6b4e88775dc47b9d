#ifndef FWBOOST_LOSSES_HPP_
#define FWBOOST_LOSSES_HPP_

#include <optional>

#include "fwboost/types.hpp"

namespace fwboost {

enum class LossKind { kSquared, kLp, kExponential, kLogistic };

/// Pointwise convex loss together with the capacity of the predictor class it
/// is evaluated on. The capacity enters only the curvature/Lipschitz
/// constants; values and derivatives are unrestricted.
///
/// squared      (a-y)^2 / 2          (the p=2 member of the lp family)
/// lp           |a-y|^p / p, p >= 2
/// exponential  exp(-y a),          y in {-1,+1}
/// logistic     log(1 + exp(-y a)), y in {-1,+1}
struct LossModel {
  LossKind kind = LossKind::kSquared;
  double p = 2.0;
  double capacity = 1.0;

  double value(double a, double y) const;
  double derivative(double a, double y) const;  // d/da
  bool needs_sign_targets() const {
    return kind == LossKind::kExponential || kind == LossKind::kLogistic;
  }

  static LossModel squared(double capacity);
  static LossModel lp(double p, double capacity);
  static LossModel exponential(double capacity);
  static LossModel logistic(double capacity);
};

/// Mean of pointwise losses over the sample.
double empirical_risk(const LossModel& loss, const Vector& preds, const Vector& targets);

/// r_i = -dL/dF(x_i) evaluated at the given predictions; includes the 1/m
/// factor coming from the empirical mean.
Vector negative_gradient(const LossModel& loss, const Vector& preds, const Vector& targets);

/// Curvature bound of the empirical risk over the capacity-C predictor class:
///   lp:          (p-1) (2C)^p        (targets assumed bounded by C)
///   exponential: 4 C^2 e^C
///   logistic:    C^2
double smoothness_constant(const LossModel& loss);

struct LipschitzBound {
  double lipschitz;  // sup |dl/da| over the feasible box
  double bound;      // sup l over the feasible box
};

/// Lipschitz constant and range bound of the pointwise loss over predictions
/// in [-C, C]. Margin losses take targets in {-1,+1}; the lp family needs an
/// explicit bound on |y| and throws when none is supplied.
LipschitzBound lipschitz_and_bound(const LossModel& loss,
                                   std::optional<double> target_bound = std::nullopt);

}  // namespace fwboost

#endif  // FWBOOST_LOSSES_HPP_
