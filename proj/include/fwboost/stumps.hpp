#ifndef FWBOOST_STUMPS_HPP_
#define FWBOOST_STUMPS_HPP_

#include <vector>

#include "fwboost/types.hpp"

namespace fwboost {

/// Candidate split thresholds: midpoints between consecutive distinct sorted
/// values, per feature. A feature with a single distinct value contributes no
/// splits; the constant hypotheses are enumerated separately and exactly once.
struct StumpSearchSpace {
  struct Cut {
    double threshold;
    int low_count;  // points with x[feature] <= threshold, in sorted order
  };
  std::vector<std::vector<Cut>> cuts;          // per feature
  std::vector<std::vector<int>> sorted_order;  // row indices sorted by (value, row)

  static StumpSearchSpace build(const Matrix& x);
};

/// Weak learner over the stump space of a fixed feature matrix. Sort orders
/// are computed once so repeated fits cost O(d m) per call.
///
/// Candidate order (also the tie-break order, earlier wins):
/// constants first (+1 before -1 for classifiers), then features ascending,
/// thresholds ascending, and +1 on the low side before -1.
class StumpFitter {
 public:
  explicit StumpFitter(Matrix x);

  /// Minimises the weighted misclassification error sum_{h(x_i) != label_i} w_i
  /// over +-1-valued stumps. Weights must be nonnegative, sum to 1 (1e-9
  /// slack) and not all zero.
  Hypothesis fit_classifier(const Vector& weights, const Vector& labels) const;

  /// Least-squares stump for real residuals: leaf values are the means of the
  /// residuals on each side of the split.
  Hypothesis fit_regression(const Vector& residuals) const;

  const Matrix& features() const { return x_; }
  const StumpSearchSpace& space() const { return space_; }

 private:
  Matrix x_;
  StumpSearchSpace space_;
};

Hypothesis train_stump_classifier(const Dataset& data, const Vector& weights,
                                  const Vector& labels);
Hypothesis train_regression_stump(const Dataset& data, const Vector& residuals);

/// Every distinct +-1 stump behaviour on the rows of x, in the canonical
/// candidate order used by the fitter.
std::vector<Hypothesis> enumerate_classification_stumps(const Matrix& x);

/// argmax_h <h, direction> with h evaluated on the rows of x; ties keep the
/// earliest atom in list order.
Hypothesis best_inner_product_oracle(const std::vector<Hypothesis>& atoms, const Matrix& x,
                                     const Vector& direction);

}  // namespace fwboost

#endif  // FWBOOST_STUMPS_HPP_
