#ifndef FWBOOST_SYNTHETIC_HPP_
#define FWBOOST_SYNTHETIC_HPP_

#include <cstdint>
#include <string>

#include "fwboost/types.hpp"

namespace fwboost {

struct SynthParams {
  int m = 200;
  int d = 2;
  double noise = 0.3;       // step: gaussian noise std
  double eta = 0.0;         // two-gaussian: label flip rate
  double separation = 2.0;  // two-gaussian: class mean distance
};

/// Deterministic synthetic datasets:
///   "step"         1-d piecewise-constant signal (levels -1, 0.5, 1 with
///                  breaks at 1/3 and 2/3) plus gaussian noise; regression.
///   "two-gaussian" d-dim gaussian blobs at +-separation/2 on the first axis
///                  with labels flipped at rate eta; classification.
///   "separable"    uniform features, label = sign(x0 - 1/2); classification.
Dataset generate_synthetic(const std::string& name, const SynthParams& params,
                           std::uint64_t seed);

}  // namespace fwboost

#endif  // FWBOOST_SYNTHETIC_HPP_
