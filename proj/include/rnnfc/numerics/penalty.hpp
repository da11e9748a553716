#pragma once

#include <functional>
#include <vector>

#include "rnnfc/dense.hpp"
#include "rnnfc/numerics/activation.hpp"

namespace rnnfc {

template <typename Scalar>
using WeightRefs = std::vector<std::reference_wrapper<const Matrix<Scalar>>>;

template <typename Scalar>
struct PenaltyResult {
  Scalar value = 0;
  std::vector<Matrix<Scalar>> gradient;  // one entry per weight matrix
};

// lambda * sum |w|, with subgradient lambda * sign(w) and sign(0) = 0.
template <typename Scalar>
PenaltyResult<Scalar> l1_penalty(const WeightRefs<Scalar>& weights, Scalar lambda) {
  require(lambda >= Scalar(0), "l1_penalty: lambda must be non-negative");
  PenaltyResult<Scalar> out;
  out.gradient.reserve(weights.size());
  for (const Matrix<Scalar>& w : weights) {
    out.value += w.cwiseAbs().sum();
    out.gradient.push_back(lambda * w.unaryExpr([](Scalar v) {
      return Scalar((v > Scalar(0)) - (v < Scalar(0)));
    }));
  }
  out.value *= lambda;
  return out;
}

// lambda * sum w^2, gradient 2 * lambda * w.
template <typename Scalar>
PenaltyResult<Scalar> l2_penalty(const WeightRefs<Scalar>& weights, Scalar lambda) {
  require(lambda >= Scalar(0), "l2_penalty: lambda must be non-negative");
  PenaltyResult<Scalar> out;
  out.gradient.reserve(weights.size());
  for (const Matrix<Scalar>& w : weights) {
    out.value += w.squaredNorm();
    out.gradient.push_back(Scalar(2) * lambda * w);
  }
  out.value *= lambda;
  return out;
}

}  // namespace rnnfc
