#include <catch_amalgamated.hpp>

#include <cmath>

#include "rnnfc/numerics/gradient_check.hpp"
#include "rnnfc/numerics/recurrent.hpp"
#include "support.hpp"

using namespace rnnfc;
using namespace rnnfc::test;

namespace {

double sig(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Element-by-element GRU step, independent of the Eigen expression path.
std::vector<double> gru_scalar(const GruCellParams<double>& p, const std::vector<double>& x,
                               const std::vector<double>& h) {
  const std::size_t H = h.size(), I = x.size();
  std::vector<double> z(H), r(H), out(H);
  for (std::size_t j = 0; j < H; ++j) {
    double az = p.b_z[j], ar = p.b_r[j];
    for (std::size_t i = 0; i < I; ++i) {
      az += p.W_z(j, i) * x[i];
      ar += p.W_r(j, i) * x[i];
    }
    for (std::size_t k = 0; k < H; ++k) {
      az += p.U_z(j, k) * h[k];
      ar += p.U_r(j, k) * h[k];
    }
    z[j] = sig(az);
    r[j] = sig(ar);
  }
  for (std::size_t j = 0; j < H; ++j) {
    double a = p.b_h[j];
    for (std::size_t i = 0; i < I; ++i) a += p.W_h(j, i) * x[i];
    for (std::size_t k = 0; k < H; ++k) a += p.U_h(j, k) * r[k] * h[k];
    out[j] = (1.0 - z[j]) * h[j] + z[j] * std::tanh(a);
  }
  return out;
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("GRU zero-parameter cases", "[recurrent][gru]") {
  GruCellParams<double> p(3, 4);
  VectorXd v(4);
  v << 1, -2, 0.5, 3;
  VectorXd x = VectorXd(VectorXd::Constant(3, 0.7));
  CHECK(gru_cell_forward(x, v, p).isApprox(0.5 * v, 1e-15));
  CHECK(gru_cell_forward(x, VectorXd(VectorXd::Zero(4)), p).isZero());

  GruCache<double> cache;
  gru_cell_forward(x, v, p, &cache);
  VectorXd g(4);
  g << 0.3, -1, 2, 0.25;
  GruCellGrads<double> grads = gru_cell_backward(g, cache, p);
  CHECK(grads.h_prev.isApprox(0.5 * g, 1e-15));

  GruCellGrads<double> none = gru_cell_backward(VectorXd(VectorXd::Zero(4)), cache, p);
  CHECK(none.x.isZero());
  CHECK(none.h_prev.isZero());
  CHECK(flatten(none.params).isZero());
}

TEST_CASE("GRU matches a scalar recomputation", "[recurrent][gru]") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    GruCellParams<double> p(2, 2);
    randomize(p, rng);
    VectorXd x = random_vector(2, rng), h = random_vector(2, rng);
    VectorXd got = gru_cell_forward(x, h, p);
    auto want = gru_scalar(p, to_std(x), to_std(h));
    for (int j = 0; j < 2; ++j) CHECK(got[j] == Catch::Approx(want[j]).margin(1e-14));
  }
}

TEST_CASE("GRU dimension mismatches are usage errors", "[recurrent][gru][errors]") {
  GruCellParams<double> p(3, 4);
  CHECK_THROWS_AS(gru_cell_forward(VectorXd(VectorXd::Zero(2)), VectorXd(VectorXd::Zero(4)), p), UsageError);
  CHECK_THROWS_AS(gru_cell_forward(VectorXd(VectorXd::Zero(3)), VectorXd(VectorXd::Zero(5)), p), UsageError);
  GruCache<double> cache;
  gru_cell_forward(VectorXd(VectorXd::Zero(3)), VectorXd(VectorXd::Zero(4)), p, &cache);
  CHECK_THROWS_AS(gru_cell_backward(VectorXd(VectorXd::Zero(3)), cache, p), UsageError);
}

TEST_CASE("GRU backward matches finite differences", "[recurrent][gru][gradcheck]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const int I = 1 + trial % 5, H = 1 + (trial / 5) % 5;
    GruCellParams<double> p(I, H);
    randomize(p, rng);
    VectorXd x = random_vector(I, rng), h = random_vector(H, rng), w = random_vector(H, rng);
    const Eigen::Index np = flatten(p).size();

    auto f = [&](const VectorXd& theta) {
      GruCellParams<double> q = p;
      unflatten(q, theta);
      return w.dot(gru_cell_forward(VectorXd(theta.segment(np, I)), VectorXd(theta.segment(np + I, H)), q));
    };
    GruCache<double> cache;
    gru_cell_forward(x, h, p, &cache);
    GruCellGrads<double> g = gru_cell_backward(w, cache, p);
    VectorXd analytic = concat({flatten(g.params), g.x, g.h_prev});
    auto res = gradient_check(f, concat({flatten(p), x, h}), analytic);
    INFO("trial " << trial << " worst " << res.worst_index);
    CHECK(res.max_relative_error < 1e-4);
  }
}

TEST_CASE("LSTM zero-parameter cases", "[recurrent][lstm]") {
  LstmCellParams<double> p(2, 3);
  VectorXd v(3);
  v << 1, -4, 0.2;
  LstmState<double> prev{VectorXd(VectorXd::Constant(3, 0.9)), v};
  LstmCache<double> cache;
  LstmState<double> next = lstm_cell_forward(VectorXd(VectorXd::Ones(2)), prev, p, &cache);
  CHECK(next.c.isApprox(0.5 * v, 1e-15));
  for (int j = 0; j < 3; ++j) CHECK(next.h[j] == Catch::Approx(0.5 * std::tanh(0.5 * v[j])).epsilon(1e-15));

  LstmCellGrads<double> none = lstm_cell_backward(LstmState<double>::zeros(3), cache, p);
  CHECK(none.x.isZero());
  CHECK(none.prev.h.isZero());
  CHECK(none.prev.c.isZero());
  CHECK(flatten(none.params).isZero());

  CHECK_THROWS_AS(lstm_cell_forward(VectorXd(VectorXd::Ones(3)), prev, p), UsageError);
}

TEST_CASE("LSTM backward matches finite differences", "[recurrent][lstm][gradcheck]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int I = 1 + trial % 5, H = 1 + (trial / 5) % 5;
    LstmCellParams<double> p(I, H);
    randomize(p, rng);
    VectorXd x = random_vector(I, rng);
    LstmState<double> prev{random_vector(H, rng), random_vector(H, rng)};
    VectorXd wh = random_vector(H, rng), wc = random_vector(H, rng);
    const Eigen::Index np = flatten(p).size();

    auto f = [&](const VectorXd& theta) {
      LstmCellParams<double> q = p;
      unflatten(q, theta);
      LstmState<double> s{theta.segment(np + I, H), theta.segment(np + I + H, H)};
      LstmState<double> n = lstm_cell_forward(VectorXd(theta.segment(np, I)), s, q);
      return wh.dot(n.h) + wc.dot(n.c);
    };
    LstmCache<double> cache;
    lstm_cell_forward(x, prev, p, &cache);
    LstmCellGrads<double> g = lstm_cell_backward(LstmState<double>{wh, wc}, cache, p);
    VectorXd analytic = concat({flatten(g.params), g.x, g.prev.h, g.prev.c});
    auto res = gradient_check(f, concat({flatten(p), x, prev.h, prev.c}), analytic);
    INFO("trial " << trial << " worst " << res.worst_index);
    CHECK(res.max_relative_error < 1e-4);
  }
}

TEST_CASE("fan-in initialisation stays in bounds", "[recurrent][init]") {
  std::mt19937_64 rng(1);
  GruCellParams<double> p(3, 20);
  init_cell(p, rng);
  CHECK(p.W_z.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(3.0));
  CHECK(p.U_h.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(20.0));
  CHECK(p.b_z.isZero());
  CHECK_FALSE(p.W_r.isZero());
}
