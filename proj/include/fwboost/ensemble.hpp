#ifndef FWBOOST_ENSEMBLE_HPP_
#define FWBOOST_ENSEMBLE_HPP_

#include <vector>

#include "fwboost/types.hpp"

namespace fwboost {

inline constexpr double kFeasibilityTolerance = 1e-9;

/// Weighted combination of base hypotheses with an l1 budget on the
/// coefficients: sum_j |alpha_j| <= capacity at all times. Atoms are
/// append-only; an away step may zero a coefficient but the entry stays so
/// that recorded atom indices remain stable.
class Ensemble {
 public:
  Ensemble() = default;
  explicit Ensemble(double capacity);

  double capacity() const { return capacity_; }
  Index size() const { return static_cast<Index>(atoms_.size()); }
  const std::vector<Hypothesis>& atoms() const { return atoms_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const std::vector<int>& active_set() const { return active_; }
  const Hypothesis& atom(int index) const { return atoms_.at(index); }
  double coefficient(int index) const { return coefficients_.at(index); }

  /// Cached sum of |alpha_j|, maintained incrementally across updates.
  double coefficient_norm() const { return norm_; }
  /// Exact recomputation of the l1 norm.
  double coefficient_norm_exact() const;

  void append(double coefficient, const Hypothesis& hypothesis);

  friend void fw_update(Ensemble& ensemble, const Hypothesis& hypothesis, double gamma);
  friend void away_update(Ensemble& ensemble, int away_index, double gamma);

 private:
  void check_invariants() const;

  double capacity_ = 1.0;
  double norm_ = 0.0;
  std::vector<Hypothesis> atoms_;
  std::vector<double> coefficients_;
  std::vector<int> active_;  // indices with coefficient > 0, ascending
};

/// F(x_i) = sum_j alpha_j h_j(x_i) over all rows of x. Empty ensembles
/// predict zero everywhere.
Vector predict(const Ensemble& ensemble, const Matrix& x);
Vector predict(const Ensemble& ensemble, const Dataset& data);

/// Frank-Wolfe update: every coefficient shrinks by (1-gamma) and the new
/// atom enters with weight gamma*capacity, so the l1 budget is preserved.
void fw_update(Ensemble& ensemble, const Hypothesis& hypothesis, double gamma);

/// Largest admissible away step for the given active atom:
/// alpha / (capacity - alpha). Throws when alpha == capacity.
double away_step_cap(const Ensemble& ensemble, int away_index);

/// Away update: coefficients scale by (1+gamma) except the away atom, which
/// moves to (1+gamma)*alpha - gamma*capacity. gamma == away_step_cap drops
/// the atom from the active set with its coefficient set to exactly zero.
void away_update(Ensemble& ensemble, int away_index, double gamma);

}  // namespace fwboost

#endif  // FWBOOST_ENSEMBLE_HPP_
