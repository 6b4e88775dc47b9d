#ifndef FWBOOST_TYPES_HPP_
#define FWBOOST_TYPES_HPP_

#include <Eigen/Core>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fwboost {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Task { kRegression, kClassification };

/// A labelled sample: one row of `features` per instance, `targets` holds the
/// response (real-valued for regression, exactly -1/+1 for classification).
struct Dataset {
  Matrix features;  // m x d
  Vector targets;   // m
  Task task = Task::kRegression;

  Index rows() const { return features.rows(); }
  Index cols() const { return features.cols(); }

  void validate() const;
  Dataset subset(const std::vector<int>& indices) const;
};

enum class HypothesisKind {
  kClassificationStump,
  kRegressionStump,
  kConstant,
  kAtom,  // externally supplied base hypothesis (atoms file)
};

/// A base hypothesis with outputs bounded by 1 in magnitude, except for raw
/// regression stumps whose leaves are normalised later by the caller.
/// Evaluation rule: x[feature] <= threshold picks `left`, otherwise `right`.
/// Constants ignore feature/threshold and always return `left`.
struct Hypothesis {
  HypothesisKind kind = HypothesisKind::kConstant;
  int feature = 0;
  double threshold = 0.0;
  double left = 0.0;
  double right = 0.0;

  double operator()(const Eigen::Ref<const Vector>& row) const {
    if (kind == HypothesisKind::kConstant) return left;
    if (feature < 0 || feature >= row.size())
      throw std::invalid_argument("hypothesis feature index " + std::to_string(feature) +
                                  " out of range for dimension " + std::to_string(row.size()));
    return row(feature) <= threshold ? left : right;
  }

  Vector evaluate(const Matrix& x) const {
    if (kind == HypothesisKind::kConstant) return Vector::Constant(x.rows(), left);
    if (feature < 0 || feature >= x.cols())
      throw std::invalid_argument("hypothesis feature index " + std::to_string(feature) +
                                  " out of range for dimension " + std::to_string(x.cols()));
    return (x.col(feature).array() <= threshold)
        .select(Vector::Constant(x.rows(), left), Vector::Constant(x.rows(), right));
  }

  static Hypothesis constant(double value) {
    return Hypothesis{HypothesisKind::kConstant, 0,
                      -std::numeric_limits<double>::infinity(), value, value};
  }
  static Hypothesis classification_stump(int feature, double threshold, double low_side) {
    return Hypothesis{HypothesisKind::kClassificationStump, feature, threshold, low_side,
                      -low_side};
  }
  static Hypothesis regression_stump(int feature, double threshold, double left, double right) {
    return Hypothesis{HypothesisKind::kRegressionStump, feature, threshold, left, right};
  }
};

bool operator==(const Hypothesis& a, const Hypothesis& b);

}  // namespace fwboost

#endif  // FWBOOST_TYPES_HPP_
