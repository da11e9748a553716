#pragma once

#include "rnnfc/dense.hpp"
#include "rnnfc/numerics/activation.hpp"

namespace rnnfc {

template <typename Scalar>
struct LossResult {
  Scalar value;
  Matrix<Scalar> grad;
};

template <typename A, typename B>
LossResult<typename A::Scalar> mse_loss(const Eigen::MatrixBase<A>& pred,
                                        const Eigen::MatrixBase<B>& target) {
  using Scalar = typename A::Scalar;
  require_same_shape(pred, target, "mse_loss");
  require(pred.size() > 0, "mse_loss: empty input");
  const Scalar n = Scalar(pred.size());
  Matrix<Scalar> diff = pred - target;
  return {diff.squaredNorm() / n, (Scalar(2) / n) * diff};
}

}  // namespace rnnfc
