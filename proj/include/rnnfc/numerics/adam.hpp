#pragma once

#include <cmath>
#include <cstdint>
#include <type_traits>

#include "rnnfc/dense.hpp"
#include "rnnfc/numerics/activation.hpp"

namespace rnnfc {

// Adam over a flat parameter vector, with bias-corrected moments.
template <typename Scalar>
struct AdamState {
  Vector<Scalar> m;
  Vector<Scalar> v;
  std::int64_t t = 0;
  Scalar lr = Scalar(0.001);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar eps = Scalar(1e-8);

  AdamState() = default;
  AdamState(Eigen::Index n, Scalar learning_rate)
      : m(Vector<Scalar>::Zero(n)), v(Vector<Scalar>::Zero(n)), lr(learning_rate) {}
};

template <typename Scalar>
void adam_step(Eigen::Ref<Vector<std::type_identity_t<Scalar>>> params,
               const Eigen::Ref<const Vector<std::type_identity_t<Scalar>>>& grads,
               AdamState<Scalar>& state) {
  require(params.size() == grads.size(), "adam_step: gradient size mismatch");
  require(state.m.size() == params.size() && state.v.size() == params.size(),
          "adam_step: optimiser state size mismatch");
  require(state.t >= 0, "adam_step: negative step counter");
  ++state.t;
  state.m = state.beta1 * state.m + (Scalar(1) - state.beta1) * grads;
  state.v = state.beta2 * state.v + (Scalar(1) - state.beta2) * grads.cwiseAbs2();
  const Scalar c1 = Scalar(1) - std::pow(state.beta1, Scalar(state.t));
  const Scalar c2 = Scalar(1) - std::pow(state.beta2, Scalar(state.t));
  params.array() -= state.lr * (state.m.array() / c1) /
                    ((state.v.array() / c2).sqrt() + state.eps);
}

}  // namespace rnnfc
