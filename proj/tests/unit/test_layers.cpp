#include <catch_amalgamated.hpp>

#include <random>

#include "rnnfc/numerics/dropout.hpp"
#include "rnnfc/numerics/gradient_check.hpp"
#include "rnnfc/numerics/linear.hpp"
#include "rnnfc/numerics/loss.hpp"
#include "rnnfc/numerics/penalty.hpp"
#include "support.hpp"

using namespace rnnfc;
using namespace rnnfc::test;

namespace {

MatrixXd example_weights() {
  MatrixXd W(2, 2);
  W << 1, -2,
       0, 3;
  return W;
}

}  // namespace

TEST_CASE("linear layer arithmetic", "[linear]") {
  VectorXd x(3);
  x << 1, -2, 5;
  CHECK(linear_forward(x, MatrixXd(MatrixXd::Identity(3, 3)), VectorXd(VectorXd::Zero(3))) == x);

  MatrixXd W(1, 1);
  W << 2;
  VectorXd b(1), one(1);
  b << 3;
  one << 1;
  CHECK(linear_forward(one, W, b)[0] == 5.0);
  CHECK_THROWS_AS(linear_forward(x, W, b), UsageError);
}

TEST_CASE("linear backward matches finite differences", "[linear][gradcheck]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int in = 1 + trial % 5, out = 1 + (trial / 4) % 5;
    MatrixXd W = random_matrix(out, in, rng);
    VectorXd b = random_vector(out, rng), x = random_vector(in, rng), w = random_vector(out, rng);
    auto f = [&](const VectorXd& t) {
      MatrixXd Wt = Eigen::Map<const MatrixXd>(t.data(), out, in);
      return w.dot(linear_forward(VectorXd(t.segment(out * in + out, in)), Wt,
                                  VectorXd(t.segment(out * in, out))));
    };
    auto g = linear_backward(w, x, W);
    VectorXd analytic = concat({Eigen::Map<const VectorXd>(g.W.data(), g.W.size()), g.b, g.x});
    VectorXd theta = concat({Eigen::Map<const VectorXd>(W.data(), W.size()), b, x});
    CHECK(gradient_check(f, theta, analytic).max_relative_error < 1e-6);
  }
}

TEST_CASE("dropout contract", "[dropout]") {
  std::mt19937_64 rng(1);
  VectorXd x(4);
  x << 1, -2, 3, 0.5;

  SECTION("rate 0 is the identity in both modes") {
    CHECK(dropout_forward(x, 0.0, rng, true).y == x);
    CHECK(dropout_forward(x, 0.0, rng, false).y == x);
  }
  SECTION("evaluation mode is the identity") {
    for (double rate : {0.0, 0.2, 0.5, 0.99}) {
      auto r = dropout_forward(x, rate, rng, false);
      CHECK(r.y == x);
      CHECK(r.mask == VectorXd(VectorXd::Ones(4)));
    }
  }
  SECTION("training masks are 0 or 1/(1-rate)") {
    auto r = dropout_forward(VectorXd(VectorXd::Ones(1000)), 0.2, rng, true);
    int dropped = 0;
    for (Eigen::Index i = 0; i < r.mask.size(); ++i) {
      const bool ok = r.mask[i] == 0.0 || r.mask[i] == 1.0 / 0.8;
      CHECK(ok);
      dropped += r.mask[i] == 0.0;
    }
    CHECK(dropped > 100);
    CHECK(dropped < 300);
    CHECK(dropout_backward(VectorXd(VectorXd::Ones(1000)), r.mask) == r.mask);
  }
  SECTION("rate outside [0, 1) is rejected") {
    CHECK_THROWS_AS(dropout_forward(x, 1.0, rng, true), UsageError);
    CHECK_THROWS_AS(dropout_forward(x, -0.1, rng, false), UsageError);
  }
}

TEST_CASE("inverted dropout preserves the expectation", "[dropout][montecarlo]") {
  std::mt19937_64 rng(2024);
  const int n = 8;
  VectorXd x = VectorXd::Ones(n);
  VectorXd sum = VectorXd::Zero(n);
  for (int k = 0; k < 100000; ++k) sum += dropout_forward(x, 0.2, rng, true).y;
  VectorXd mean = sum / 100000.0;
  for (int i = 0; i < n; ++i) CHECK(std::abs(mean[i] - 1.0) < 0.01);
}

TEST_CASE("penalty arithmetic", "[penalty]") {
  MatrixXd W = example_weights();
  WeightRefs<double> refs{std::cref(W)};
  auto l1 = l1_penalty(refs, 0.01);
  auto l2 = l2_penalty(refs, 0.01);
  CHECK(std::abs(l1.value - 0.06) <= 1e-12);
  CHECK(std::abs(l2.value - 0.14) <= 1e-12);
  MatrixXd sign(2, 2), twice(2, 2);
  sign << 0.01, -0.01, 0, 0.01;
  twice << 0.02, -0.04, 0, 0.06;
  CHECK(l1.gradient[0].isApprox(sign, 1e-15));
  CHECK(l2.gradient[0].isApprox(twice, 1e-15));

  auto off = l1_penalty(refs, 0.0);
  CHECK(off.value == 0.0);
  CHECK(off.gradient[0].isZero());
  CHECK(l2_penalty(refs, 0.0).value == 0.0);
  CHECK_THROWS_AS(l1_penalty(refs, -1.0), UsageError);
}

TEST_CASE("penalties are linear in lambda and vanish only at zero", "[penalty][property]") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    MatrixXd A = random_matrix(3, 2, rng), B = random_matrix(2, 2, rng);
    WeightRefs<double> refs{std::cref(A), std::cref(B)};
    const double l = lam(rng);
    CHECK(l1_penalty(refs, 3.0 * l).value == Catch::Approx(3.0 * l1_penalty(refs, l).value));
    CHECK(l2_penalty(refs, 3.0 * l).value == Catch::Approx(3.0 * l2_penalty(refs, l).value));
    CHECK(l1_penalty(refs, l + 0.01).value > 0.0);
  }
  MatrixXd Z = MatrixXd::Zero(3, 3);
  WeightRefs<double> zero{std::cref(Z)};
  CHECK(l1_penalty(zero, 0.5).value == 0.0);
  CHECK(l2_penalty(zero, 0.5).value == 0.0);
}

TEST_CASE("penalty gradients match finite differences", "[penalty][gradcheck]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mag(0.01, 1.0);
  std::bernoulli_distribution neg(0.5);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixXd W(3, 4);
    for (Eigen::Index i = 0; i < W.size(); ++i) W.data()[i] = neg(rng) ? -mag(rng) : mag(rng);
    VectorXd theta = Eigen::Map<const VectorXd>(W.data(), W.size());
    for (int which = 0; which < 2; ++which) {
      auto pen = [&](const MatrixXd& M) {
        WeightRefs<double> r{std::cref(M)};
        return which == 0 ? l1_penalty(r, 0.01) : l2_penalty(r, 0.01);
      };
      auto f = [&](const VectorXd& t) { return pen(Eigen::Map<const MatrixXd>(t.data(), 3, 4)).value; };
      auto res = pen(W);
      VectorXd analytic = Eigen::Map<const VectorXd>(res.gradient[0].data(), W.size());
      CHECK(gradient_check(f, theta, analytic).max_relative_error < (which == 0 ? 1e-5 : 1e-6));
    }
  }
}

TEST_CASE("mse loss", "[loss]") {
  MatrixXd pred(1, 2), target = MatrixXd::Zero(1, 2);
  pred << 1, 2;
  auto r = mse_loss(pred, target);
  CHECK(r.value == 2.5);
  CHECK(r.grad(0, 0) == 1.0);
  CHECK(r.grad(0, 1) == 2.0);
  CHECK(mse_loss(pred, pred).value == 0.0);
  CHECK_THROWS_AS(mse_loss(pred, MatrixXd::Zero(2, 1)), UsageError);

  std::mt19937_64 rng(3);
  MatrixXd P = random_matrix(3, 4, rng), T = random_matrix(3, 4, rng);
  auto f = [&](const VectorXd& t) { return mse_loss(Eigen::Map<const MatrixXd>(t.data(), 3, 4), T).value; };
  auto g = mse_loss(P, T).grad;
  CHECK(gradient_check(f, VectorXd(Eigen::Map<const VectorXd>(P.data(), 12)),
                       VectorXd(Eigen::Map<const VectorXd>(g.data(), 12)))
            .max_relative_error < 1e-6);
}
