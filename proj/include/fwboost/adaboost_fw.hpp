#ifndef FWBOOST_ADABOOST_FW_HPP_
#define FWBOOST_ADABOOST_FW_HPP_

#include "fwboost/solver.hpp"

namespace fwboost {

/// Sample distribution kept in the log domain so repeated powers D^(1-gamma)
/// stay stable. Normalised: log-sum-exp of the entries is 0.
struct DistributionWeights {
  Vector log_weights;

  static DistributionWeights uniform(Index m);
  Vector weights() const;
  void normalize();
};

/// D'(i) proportional to D(i)^(1-gamma) * exp(-gamma * C * y_i * h(x_i)).
/// A zero weight stays zero for gamma < 1; at gamma == 1 the update is
/// independent of D.
DistributionWeights update_distribution(const DistributionWeights& d, double gamma,
                                        double capacity, const Vector& hypothesis_preds,
                                        const Vector& labels);

/// Reweightening form of the l1-constrained boosting loop for the exponential
/// loss: trains a stump on D_t, picks gamma by the policy, then rescales both
/// the distribution and the coefficient vector. Matches run_fwboost_c with
/// the exponential loss round for round.
FitReport run_adaboost_fw(const Dataset& data, const FitOptions& options);

}  // namespace fwboost

#endif  // FWBOOST_ADABOOST_FW_HPP_
