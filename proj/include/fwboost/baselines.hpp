#ifndef FWBOOST_BASELINES_HPP_
#define FWBOOST_BASELINES_HPP_

#include <cstdint>

#include "fwboost/solver.hpp"

namespace fwboost {

/// Knobs for the unconstrained gradient-boosting comparison runs. Shrinkage
/// and subsampling in (0,1]; patience 0 disables early stopping.
struct BaselineConfig {
  double shrinkage = 1.0;
  double subsample = 1.0;
  int patience = 0;
  double validation_fraction = 0.2;
  double line_search_tol = 1e-10;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Stagewise additive boosting: fit a stump to the negative gradient
/// (least squares for real losses, weighted error for the exponential loss),
/// take the exact line-search step, shrink it by the configured factor.
/// Optionally fits on a random subsample per round and stops early when the
/// held-out risk stalls. Coefficients are unconstrained; the reported
/// coefficient norm is informational only.
FitReport run_gradient_boosting(const Dataset& data, const LossModel& loss,
                                const BaselineConfig& config, int iterations);

}  // namespace fwboost

#endif  // FWBOOST_BASELINES_HPP_
