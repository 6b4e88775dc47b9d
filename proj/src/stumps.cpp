#include "fwboost/stumps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fwboost {

StumpSearchSpace StumpSearchSpace::build(const Matrix& x) {
  StumpSearchSpace space;
  const Index m = x.rows();
  const Index d = x.cols();
  space.cuts.resize(d);
  space.sorted_order.resize(d);
  for (Index f = 0; f < d; ++f) {
    auto& order = space.sorted_order[f];
    order.resize(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double va = x(a, f), vb = x(b, f);
      return va < vb || (va == vb && a < b);
    });
    auto& cuts = space.cuts[f];
    for (Index k = 0; k + 1 < m; ++k) {
      const double lo = x(order[k], f);
      const double hi = x(order[k + 1], f);
      if (lo == hi) continue;
      const double mid = lo + 0.5 * (hi - lo);
      if (!(mid < hi)) continue;  // adjacent representable values
      cuts.push_back({mid, static_cast<int>(k) + 1});
    }
  }
  return space;
}

StumpFitter::StumpFitter(Matrix x) : x_(std::move(x)), space_(StumpSearchSpace::build(x_)) {}

Hypothesis StumpFitter::fit_classifier(const Vector& weights, const Vector& labels) const {
  const Index m = x_.rows();
  if (weights.size() != m || labels.size() != m)
    throw std::invalid_argument("weights/labels length does not match the training set");
  double total = 0.0;
  bool any_positive = false;
  for (Index i = 0; i < m; ++i) {
    if (weights(i) < 0.0) throw std::invalid_argument("stump weights must be nonnegative");
    if (weights(i) > 0.0) any_positive = true;
    total += weights(i);
  }
  if (!any_positive) throw std::invalid_argument("stump weights are all zero");
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("stump weights must sum to 1");

  // Maximising sum_i h(x_i) w_i label_i is the same as minimising the
  // weighted error: the two are related by score = 1 - 2 * error.
  Vector signed_weight(m);
  double sum_signed = 0.0;
  for (Index i = 0; i < m; ++i) {
    signed_weight(i) = weights(i) * labels(i);
    sum_signed += signed_weight(i);
  }

  Hypothesis best = Hypothesis::constant(1.0);
  best.kind = HypothesisKind::kClassificationStump;
  double best_score = sum_signed;  // h == +1
  if (-sum_signed > best_score) {  // h == -1
    best_score = -sum_signed;
    best = Hypothesis::constant(-1.0);
    best.kind = HypothesisKind::kClassificationStump;
  }

  for (Index f = 0; f < x_.cols(); ++f) {
    const auto& order = space_.sorted_order[f];
    const auto& cuts = space_.cuts[f];
    double prefix = 0.0;
    int consumed = 0;
    for (const auto& cut : cuts) {
      while (consumed < cut.low_count) prefix += signed_weight(order[consumed++]);
      const double low_positive = 2.0 * prefix - sum_signed;
      if (low_positive > best_score) {
        best_score = low_positive;
        best = Hypothesis::classification_stump(static_cast<int>(f), cut.threshold, 1.0);
      }
      if (-low_positive > best_score) {
        best_score = -low_positive;
        best = Hypothesis::classification_stump(static_cast<int>(f), cut.threshold, -1.0);
      }
    }
  }
  return best;
}

Hypothesis StumpFitter::fit_regression(const Vector& residuals) const {
  const Index m = x_.rows();
  if (residuals.size() != m)
    throw std::invalid_argument("residual length does not match the training set");

  const double total = residuals.sum();
  const double mean = total / static_cast<double>(m);
  Hypothesis best = Hypothesis::constant(mean);
  // Maximising the explained sum of squares is the same as minimising the
  // squared error; the constant fit explains total^2 / m.
  double best_score = total * total / static_cast<double>(m);

  for (Index f = 0; f < x_.cols(); ++f) {
    const auto& order = space_.sorted_order[f];
    const auto& cuts = space_.cuts[f];
    double prefix = 0.0;
    int consumed = 0;
    for (const auto& cut : cuts) {
      while (consumed < cut.low_count) prefix += residuals(order[consumed++]);
      const double n_low = static_cast<double>(cut.low_count);
      const double n_high = static_cast<double>(m - cut.low_count);
      const double rest = total - prefix;
      const double score = prefix * prefix / n_low + rest * rest / n_high;
      if (score > best_score) {
        best_score = score;
        best = Hypothesis::regression_stump(static_cast<int>(f), cut.threshold, prefix / n_low,
                                            rest / n_high);
      }
    }
  }
  return best;
}

Hypothesis train_stump_classifier(const Dataset& data, const Vector& weights,
                                  const Vector& labels) {
  return StumpFitter(data.features).fit_classifier(weights, labels);
}

Hypothesis train_regression_stump(const Dataset& data, const Vector& residuals) {
  return StumpFitter(data.features).fit_regression(residuals);
}

std::vector<Hypothesis> enumerate_classification_stumps(const Matrix& x) {
  const StumpSearchSpace space = StumpSearchSpace::build(x);
  std::vector<Hypothesis> atoms;
  Hypothesis plus = Hypothesis::constant(1.0);
  plus.kind = HypothesisKind::kClassificationStump;
  Hypothesis minus = Hypothesis::constant(-1.0);
  minus.kind = HypothesisKind::kClassificationStump;
  atoms.push_back(plus);
  atoms.push_back(minus);
  for (size_t f = 0; f < space.cuts.size(); ++f) {
    for (const auto& cut : space.cuts[f]) {
      atoms.push_back(Hypothesis::classification_stump(static_cast<int>(f), cut.threshold, 1.0));
      atoms.push_back(Hypothesis::classification_stump(static_cast<int>(f), cut.threshold, -1.0));
    }
  }
  return atoms;
}

Hypothesis best_inner_product_oracle(const std::vector<Hypothesis>& atoms, const Matrix& x,
                                     const Vector& direction) {
  if (atoms.empty()) throw std::invalid_argument("oracle needs a nonempty atom list");
  size_t best = 0;
  double best_dot = atoms[0].evaluate(x).dot(direction);
  for (size_t j = 1; j < atoms.size(); ++j) {
    const double dot = atoms[j].evaluate(x).dot(direction);
    if (dot > best_dot) {
      best_dot = dot;
      best = j;
    }
  }
  return atoms[best];
}

}  // namespace fwboost
