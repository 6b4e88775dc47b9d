#ifndef FWBOOST_ANALYSIS_HPP_
#define FWBOOST_ANALYSIS_HPP_

#include <cstdint>
#include <vector>

#include "fwboost/losses.hpp"
#include "fwboost/types.hpp"

namespace fwboost {

enum class SigmaMode { kAuto, kMonteCarlo, kExact };

struct RademacherEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long long draws = 0;
};

/// E_sigma[ sup_g (1/m) sum_i sigma_i g(x_i) ] for a finite function class
/// given by its rows of evaluations (one row per function). Exact mode
/// enumerates all 2^m sign vectors (m <= 20); auto picks exact for m <= 12.
RademacherEstimate rademacher_of_predictions(const Matrix& function_values, long long draws,
                                             std::uint64_t seed, SigmaMode mode = SigmaMode::kAuto);

RademacherEstimate estimate_rademacher(const std::vector<Hypothesis>& hypotheses, const Matrix& x,
                                       long long draws, std::uint64_t seed,
                                       SigmaMode mode = SigmaMode::kAuto);

struct CombinedClassCheck {
  RademacherEstimate combined;     // grid approximation of the T-term l1-ball class
  RademacherEstimate scaled_base;  // capacity * complexity of the base class
};

/// Compares the complexity of {sum_j alpha_j h_j : ||alpha||_1 <= C, at most
/// `terms` atoms} (approximated on a per-coordinate grid that contains
/// -C, 0, +C) against C times the base-class complexity. The base list must
/// be sign-symmetric for the comparison to be meaningful.
CombinedClassCheck check_combined_class_bound(const std::vector<Hypothesis>& base, double capacity,
                                              int terms, const Matrix& x, long long draws,
                                              std::uint64_t seed, int grid_points_per_axis = 9,
                                              SigmaMode mode = SigmaMode::kAuto);

/// High-probability risk bound: empirical + 2 L R + 3 M sqrt(log(2/delta)/(2m)).
double generalization_bound(double empirical_risk, double lipschitz, double loss_bound,
                            double rademacher, double delta, int sample_size);

/// Suboptimality envelope (C*/(2+t)) (1+2 delta) for t = 1..iterations, with
/// C* = max(smoothness/2, 3/4 * initial risk).
std::vector<double> convergence_bound_curve(const LossModel& loss, double initial_risk,
                                            int iterations, double delta);

}  // namespace fwboost

#endif  // FWBOOST_ANALYSIS_HPP_
