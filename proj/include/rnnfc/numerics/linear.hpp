#pragma once

#include "rnnfc/dense.hpp"
#include "rnnfc/numerics/activation.hpp"

namespace rnnfc {

// Affine map y = W x + b with identity activation.
template <typename Scalar>
struct Linear {
  Matrix<Scalar> W;
  Vector<Scalar> b;

  Linear() = default;
  Linear(Eigen::Index in, Eigen::Index out)
      : W(Matrix<Scalar>::Zero(out, in)), b(Vector<Scalar>::Zero(out)) {}
};

template <typename Scalar>
Vector<Scalar> linear_forward(const Vector<Scalar>& x, const Matrix<Scalar>& W,
                              const Vector<Scalar>& b) {
  require(W.cols() == x.size(), "linear_forward: W columns must equal input size");
  require(W.rows() == b.size(), "linear_forward: bias size must equal W rows");
  return W * x + b;
}

template <typename Scalar>
Vector<Scalar> linear_forward(const Vector<Scalar>& x, const Linear<Scalar>& layer) {
  return linear_forward(x, layer.W, layer.b);
}

template <typename Scalar>
struct LinearGrads {
  Vector<Scalar> x;
  Matrix<Scalar> W;
  Vector<Scalar> b;
};

// The forward cache of an affine layer is just its input.
template <typename Scalar>
LinearGrads<Scalar> linear_backward(const Vector<Scalar>& grad_y, const Vector<Scalar>& x,
                                    const Matrix<Scalar>& W) {
  require(grad_y.size() == W.rows() && x.size() == W.cols(),
          "linear_backward: cache does not match layer");
  return {W.transpose() * grad_y, grad_y * x.transpose(), grad_y};
}

}  // namespace rnnfc
