#pragma once

#include <random>

#include "rnnfc/dense.hpp"
#include "rnnfc/numerics/activation.hpp"

namespace rnnfc {

// Inverted dropout. The mask holds the per-element multiplier: 0 for dropped
// elements, 1/(1-rate) for kept ones, and 1 everywhere outside training.
template <typename Scalar>
struct DropoutResult {
  Vector<Scalar> y;
  Vector<Scalar> mask;
};

template <typename Scalar, typename Rng>
DropoutResult<Scalar> dropout_forward(const Vector<Scalar>& x, Scalar rate, Rng& rng,
                                      bool training) {
  require(rate >= Scalar(0) && rate < Scalar(1), "dropout_forward: rate must lie in [0, 1)");
  Vector<Scalar> mask = Vector<Scalar>::Ones(x.size());
  if (training && rate > Scalar(0)) {
    const Scalar keep_scale = Scalar(1) / (Scalar(1) - rate);
    std::uniform_real_distribution<Scalar> u(Scalar(0), Scalar(1));
    for (Eigen::Index i = 0; i < mask.size(); ++i) mask[i] = u(rng) < rate ? Scalar(0) : keep_scale;
  }
  return {x.cwiseProduct(mask), std::move(mask)};
}

template <typename Scalar>
Vector<Scalar> dropout_backward(const Vector<Scalar>& grad_y, const Vector<Scalar>& mask) {
  require(grad_y.size() == mask.size(), "dropout_backward: mask size mismatch");
  return grad_y.cwiseProduct(mask);
}

}  // namespace rnnfc
