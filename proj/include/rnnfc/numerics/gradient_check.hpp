#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "rnnfc/dense.hpp"
#include "rnnfc/errors.hpp"
#include "rnnfc/numerics/activation.hpp"

namespace rnnfc {

template <typename Scalar>
struct GradientCheckResult {
  Scalar max_relative_error = 0;
  Eigen::Index worst_index = -1;
  Vector<Scalar> numeric;
};

// Relative error |a - n| / max(|a| + |n|, floor); the floor keeps coordinates
// whose true gradient is ~0 from dominating through cancellation noise.
template <typename Scalar>
Scalar relative_error(Scalar analytic, Scalar numeric, Scalar floor = Scalar(1e-5)) {
  return std::abs(analytic - numeric) / std::max(std::abs(analytic) + std::abs(numeric), floor);
}

// Central differences of f at `params`, compared coordinate-wise with `analytic`.
template <typename Scalar, typename F>
GradientCheckResult<Scalar> gradient_check(F&& f, Vector<Scalar> params,
                                           const Vector<Scalar>& analytic,
                                           Scalar eps = Scalar(1e-6)) {
  require(eps > Scalar(0), "gradient_check: eps must be positive");
  require(params.size() == analytic.size(), "gradient_check: gradient size mismatch");
  GradientCheckResult<Scalar> out;
  out.numeric.resize(params.size());
  auto eval = [&](Eigen::Index i) {
    const Scalar v = f(static_cast<const Vector<Scalar>&>(params));
    if (!std::isfinite(v))
      throw NumericError("gradient_check: non-finite function value at coordinate " +
                         std::to_string(i));
    return v;
  };
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const Scalar saved = params[i];
    params[i] = saved + eps;
    const Scalar plus = eval(i);
    params[i] = saved - eps;
    const Scalar minus = eval(i);
    params[i] = saved;
    out.numeric[i] = (plus - minus) / (Scalar(2) * eps);
    const Scalar err = relative_error(analytic[i], out.numeric[i]);
    if (err > out.max_relative_error || out.worst_index < 0) {
      out.max_relative_error = err;
      out.worst_index = i;
    }
  }
  return out;
}

}  // namespace rnnfc
