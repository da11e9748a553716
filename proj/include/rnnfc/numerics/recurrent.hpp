#pragma once

#include <random>

#include "rnnfc/dense.hpp"
#include "rnnfc/numerics/activation.hpp"

namespace rnnfc {

// Gated recurrent unit. The update gate z weights the candidate state:
//   h_t = (1 - z) * h_prev + z * h_tilde
template <typename Scalar>
struct GruCellParams {
  Matrix<Scalar> W_z, W_r, W_h;  // hidden x input
  Matrix<Scalar> U_z, U_r, U_h;  // hidden x hidden
  Vector<Scalar> b_z, b_r, b_h;

  GruCellParams() = default;
  GruCellParams(Eigen::Index input, Eigen::Index hidden)
      : W_z(Matrix<Scalar>::Zero(hidden, input)),
        W_r(Matrix<Scalar>::Zero(hidden, input)),
        W_h(Matrix<Scalar>::Zero(hidden, input)),
        U_z(Matrix<Scalar>::Zero(hidden, hidden)),
        U_r(Matrix<Scalar>::Zero(hidden, hidden)),
        U_h(Matrix<Scalar>::Zero(hidden, hidden)),
        b_z(Vector<Scalar>::Zero(hidden)),
        b_r(Vector<Scalar>::Zero(hidden)),
        b_h(Vector<Scalar>::Zero(hidden)) {}

  Eigen::Index input_size() const { return W_z.cols(); }
  Eigen::Index hidden_size() const { return W_z.rows(); }

  // Visits every tensor in a fixed order: inputs, recurrents, biases.
  template <typename F>
  void for_each(F&& f) {
    f(W_z); f(W_r); f(W_h); f(U_z); f(U_r); f(U_h); f(b_z); f(b_r); f(b_h);
  }
  template <typename F>
  void for_each(F&& f) const {
    f(W_z); f(W_r); f(W_h); f(U_z); f(U_r); f(U_h); f(b_z); f(b_r); f(b_h);
  }

  void check() const {
    const auto h = hidden_size();
    const auto in = input_size();
    require(W_r.rows() == h && W_r.cols() == in && W_h.rows() == h && W_h.cols() == in,
            "GruCellParams: input weight shapes differ");
    require(U_z.rows() == h && U_z.cols() == h && U_r.rows() == h && U_r.cols() == h &&
                U_h.rows() == h && U_h.cols() == h,
            "GruCellParams: recurrent weights must be hidden x hidden");
    require(b_z.size() == h && b_r.size() == h && b_h.size() == h,
            "GruCellParams: bias length must equal hidden size");
  }
};

template <typename Scalar>
struct GruCache {
  Vector<Scalar> x, h_prev, z, r, h_tilde, r_h;
};

template <typename Scalar>
Vector<Scalar> gru_cell_forward(const Vector<Scalar>& x, const Vector<Scalar>& h_prev,
                                const GruCellParams<Scalar>& p, GruCache<Scalar>* cache = nullptr) {
  require(x.size() == p.input_size(), "gru_cell_forward: input size mismatch");
  require(h_prev.size() == p.hidden_size(), "gru_cell_forward: hidden size mismatch");
  Vector<Scalar> z = sigmoid(p.W_z * x + p.U_z * h_prev + p.b_z);
  Vector<Scalar> r = sigmoid(p.W_r * x + p.U_r * h_prev + p.b_r);
  Vector<Scalar> r_h = r.cwiseProduct(h_prev);
  Vector<Scalar> h_tilde = tanh(p.W_h * x + p.U_h * r_h + p.b_h);
  Vector<Scalar> h = (Vector<Scalar>::Ones(z.size()) - z).cwiseProduct(h_prev) +
                     z.cwiseProduct(h_tilde);
  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->h_tilde = std::move(h_tilde);
    cache->r_h = std::move(r_h);
  }
  return h;
}

template <typename Scalar>
struct CellInputGrads {
  Vector<Scalar> x;
  Vector<Scalar> h_prev;
};

// Adds d(loss)/d(params) into `grads` and returns the input/state gradients.
template <typename Scalar>
CellInputGrads<Scalar> gru_cell_backward(const Vector<Scalar>& grad_h, const GruCache<Scalar>& c,
                                         const GruCellParams<Scalar>& p,
                                         GruCellParams<Scalar>& grads) {
  const auto H = p.hidden_size();
  require(grad_h.size() == H, "gru_cell_backward: gradient size mismatch");
  require(c.z.size() == H && c.h_prev.size() == H && c.x.size() == p.input_size(),
          "gru_cell_backward: cache does not match params");
  require(grads.hidden_size() == H && grads.input_size() == p.input_size(),
          "gru_cell_backward: gradient accumulator shape mismatch");

  const auto ones = Vector<Scalar>::Ones(H);
  Vector<Scalar> d_z = grad_h.cwiseProduct(c.h_tilde - c.h_prev);
  Vector<Scalar> d_h_prev = grad_h.cwiseProduct(ones - c.z);

  Vector<Scalar> da_h =
      grad_h.cwiseProduct(c.z).cwiseProduct(ones - c.h_tilde.cwiseProduct(c.h_tilde));
  grads.W_h.noalias() += da_h * c.x.transpose();
  grads.U_h.noalias() += da_h * c.r_h.transpose();
  grads.b_h += da_h;
  Vector<Scalar> d_rh = p.U_h.transpose() * da_h;
  Vector<Scalar> d_r = d_rh.cwiseProduct(c.h_prev);
  d_h_prev += d_rh.cwiseProduct(c.r);

  Vector<Scalar> da_r = d_r.cwiseProduct(c.r).cwiseProduct(ones - c.r);
  grads.W_r.noalias() += da_r * c.x.transpose();
  grads.U_r.noalias() += da_r * c.h_prev.transpose();
  grads.b_r += da_r;

  Vector<Scalar> da_z = d_z.cwiseProduct(c.z).cwiseProduct(ones - c.z);
  grads.W_z.noalias() += da_z * c.x.transpose();
  grads.U_z.noalias() += da_z * c.h_prev.transpose();
  grads.b_z += da_z;

  d_h_prev.noalias() += p.U_r.transpose() * da_r + p.U_z.transpose() * da_z;
  Vector<Scalar> d_x = p.W_h.transpose() * da_h + p.W_r.transpose() * da_r +
                       p.W_z.transpose() * da_z;
  return {std::move(d_x), std::move(d_h_prev)};
}

template <typename Scalar>
struct GruCellGrads {
  Vector<Scalar> x;
  Vector<Scalar> h_prev;
  GruCellParams<Scalar> params;
};

template <typename Scalar>
GruCellGrads<Scalar> gru_cell_backward(const Vector<Scalar>& grad_h, const GruCache<Scalar>& c,
                                       const GruCellParams<Scalar>& p) {
  GruCellParams<Scalar> grads(p.input_size(), p.hidden_size());
  auto in = gru_cell_backward(grad_h, c, p, grads);
  return {std::move(in.x), std::move(in.h_prev), std::move(grads)};
}

// Standard LSTM: i, f, o = sigmoid(.), g = tanh(.), c = f*c_prev + i*g, h = o*tanh(c).
template <typename Scalar>
struct LstmCellParams {
  Matrix<Scalar> W_i, W_f, W_o, W_c;  // hidden x input
  Matrix<Scalar> U_i, U_f, U_o, U_c;  // hidden x hidden
  Vector<Scalar> b_i, b_f, b_o, b_c;

  LstmCellParams() = default;
  LstmCellParams(Eigen::Index input, Eigen::Index hidden)
      : W_i(Matrix<Scalar>::Zero(hidden, input)),
        W_f(Matrix<Scalar>::Zero(hidden, input)),
        W_o(Matrix<Scalar>::Zero(hidden, input)),
        W_c(Matrix<Scalar>::Zero(hidden, input)),
        U_i(Matrix<Scalar>::Zero(hidden, hidden)),
        U_f(Matrix<Scalar>::Zero(hidden, hidden)),
        U_o(Matrix<Scalar>::Zero(hidden, hidden)),
        U_c(Matrix<Scalar>::Zero(hidden, hidden)),
        b_i(Vector<Scalar>::Zero(hidden)),
        b_f(Vector<Scalar>::Zero(hidden)),
        b_o(Vector<Scalar>::Zero(hidden)),
        b_c(Vector<Scalar>::Zero(hidden)) {}

  Eigen::Index input_size() const { return W_i.cols(); }
  Eigen::Index hidden_size() const { return W_i.rows(); }

  template <typename F>
  void for_each(F&& f) {
    f(W_i); f(W_f); f(W_o); f(W_c); f(U_i); f(U_f); f(U_o); f(U_c);
    f(b_i); f(b_f); f(b_o); f(b_c);
  }
  template <typename F>
  void for_each(F&& f) const {
    f(W_i); f(W_f); f(W_o); f(W_c); f(U_i); f(U_f); f(U_o); f(U_c);
    f(b_i); f(b_f); f(b_o); f(b_c);
  }

  void check() const {
    const auto h = hidden_size();
    const auto in = input_size();
    for (const auto* W : {&W_f, &W_o, &W_c})
      require(W->rows() == h && W->cols() == in, "LstmCellParams: input weight shapes differ");
    for (const auto* U : {&U_i, &U_f, &U_o, &U_c})
      require(U->rows() == h && U->cols() == h,
              "LstmCellParams: recurrent weights must be hidden x hidden");
    for (const auto* b : {&b_i, &b_f, &b_o, &b_c})
      require(b->size() == h, "LstmCellParams: bias length must equal hidden size");
  }
};

template <typename Scalar>
struct LstmState {
  Vector<Scalar> h;
  Vector<Scalar> c;

  static LstmState zeros(Eigen::Index hidden) {
    return {Vector<Scalar>::Zero(hidden), Vector<Scalar>::Zero(hidden)};
  }
};

template <typename Scalar>
struct LstmCache {
  Vector<Scalar> x, h_prev, c_prev, i, f, o, g, tanh_c;
};

template <typename Scalar>
LstmState<Scalar> lstm_cell_forward(const Vector<Scalar>& x, const LstmState<Scalar>& prev,
                                    const LstmCellParams<Scalar>& p,
                                    LstmCache<Scalar>* cache = nullptr) {
  require(x.size() == p.input_size(), "lstm_cell_forward: input size mismatch");
  require(prev.h.size() == p.hidden_size() && prev.c.size() == p.hidden_size(),
          "lstm_cell_forward: state size mismatch");
  Vector<Scalar> i = sigmoid(p.W_i * x + p.U_i * prev.h + p.b_i);
  Vector<Scalar> f = sigmoid(p.W_f * x + p.U_f * prev.h + p.b_f);
  Vector<Scalar> o = sigmoid(p.W_o * x + p.U_o * prev.h + p.b_o);
  Vector<Scalar> g = tanh(p.W_c * x + p.U_c * prev.h + p.b_c);
  LstmState<Scalar> next;
  next.c = f.cwiseProduct(prev.c) + i.cwiseProduct(g);
  Vector<Scalar> tanh_c = tanh(next.c);
  next.h = o.cwiseProduct(tanh_c);
  if (cache) {
    cache->x = x;
    cache->h_prev = prev.h;
    cache->c_prev = prev.c;
    cache->i = std::move(i);
    cache->f = std::move(f);
    cache->o = std::move(o);
    cache->g = std::move(g);
    cache->tanh_c = std::move(tanh_c);
  }
  return next;
}

template <typename Scalar>
struct LstmInputGrads {
  Vector<Scalar> x;
  LstmState<Scalar> prev;
};

// `grad` carries d(loss)/dh_t and d(loss)/dc_t; parameter gradients are added into `grads`.
template <typename Scalar>
LstmInputGrads<Scalar> lstm_cell_backward(const LstmState<Scalar>& grad,
                                          const LstmCache<Scalar>& c,
                                          const LstmCellParams<Scalar>& p,
                                          LstmCellParams<Scalar>& grads) {
  const auto H = p.hidden_size();
  require(grad.h.size() == H && grad.c.size() == H, "lstm_cell_backward: gradient size mismatch");
  require(c.i.size() == H && c.c_prev.size() == H && c.x.size() == p.input_size(),
          "lstm_cell_backward: cache does not match params");
  require(grads.hidden_size() == H && grads.input_size() == p.input_size(),
          "lstm_cell_backward: gradient accumulator shape mismatch");

  const auto ones = Vector<Scalar>::Ones(H);
  Vector<Scalar> d_o = grad.h.cwiseProduct(c.tanh_c);
  Vector<Scalar> d_c = grad.c + grad.h.cwiseProduct(c.o).cwiseProduct(
                                    ones - c.tanh_c.cwiseProduct(c.tanh_c));
  Vector<Scalar> da_f = d_c.cwiseProduct(c.c_prev).cwiseProduct(c.f).cwiseProduct(ones - c.f);
  Vector<Scalar> da_i = d_c.cwiseProduct(c.g).cwiseProduct(c.i).cwiseProduct(ones - c.i);
  Vector<Scalar> da_g = d_c.cwiseProduct(c.i).cwiseProduct(ones - c.g.cwiseProduct(c.g));
  Vector<Scalar> da_o = d_o.cwiseProduct(c.o).cwiseProduct(ones - c.o);

  grads.W_i.noalias() += da_i * c.x.transpose();
  grads.W_f.noalias() += da_f * c.x.transpose();
  grads.W_o.noalias() += da_o * c.x.transpose();
  grads.W_c.noalias() += da_g * c.x.transpose();
  grads.U_i.noalias() += da_i * c.h_prev.transpose();
  grads.U_f.noalias() += da_f * c.h_prev.transpose();
  grads.U_o.noalias() += da_o * c.h_prev.transpose();
  grads.U_c.noalias() += da_g * c.h_prev.transpose();
  grads.b_i += da_i;
  grads.b_f += da_f;
  grads.b_o += da_o;
  grads.b_c += da_g;

  LstmInputGrads<Scalar> out;
  out.x = p.W_i.transpose() * da_i + p.W_f.transpose() * da_f + p.W_o.transpose() * da_o +
          p.W_c.transpose() * da_g;
  out.prev.h = p.U_i.transpose() * da_i + p.U_f.transpose() * da_f + p.U_o.transpose() * da_o +
               p.U_c.transpose() * da_g;
  out.prev.c = d_c.cwiseProduct(c.f);
  return out;
}

template <typename Scalar>
struct LstmCellGrads {
  Vector<Scalar> x;
  LstmState<Scalar> prev;
  LstmCellParams<Scalar> params;
};

template <typename Scalar>
LstmCellGrads<Scalar> lstm_cell_backward(const LstmState<Scalar>& grad, const LstmCache<Scalar>& c,
                                         const LstmCellParams<Scalar>& p) {
  LstmCellParams<Scalar> grads(p.input_size(), p.hidden_size());
  auto in = lstm_cell_backward(grad, c, p, grads);
  return {std::move(in.x), std::move(in.prev), std::move(grads)};
}

// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights; biases stay zero.
template <typename Scalar, typename Rng>
void init_uniform_fan_in(Matrix<Scalar>& W, Rng& rng) {
  const Scalar bound = Scalar(1) / std::sqrt(Scalar(W.cols()));
  std::uniform_real_distribution<Scalar> dist(-bound, bound);
  for (Eigen::Index j = 0; j < W.cols(); ++j)
    for (Eigen::Index i = 0; i < W.rows(); ++i) W(i, j) = dist(rng);
}

template <typename Scalar, typename Rng>
void init_cell(GruCellParams<Scalar>& p, Rng& rng) {
  for (auto* W : {&p.W_z, &p.W_r, &p.W_h, &p.U_z, &p.U_r, &p.U_h}) init_uniform_fan_in(*W, rng);
}

template <typename Scalar, typename Rng>
void init_cell(LstmCellParams<Scalar>& p, Rng& rng) {
  for (auto* W : {&p.W_i, &p.W_f, &p.W_o, &p.W_c, &p.U_i, &p.U_f, &p.U_o, &p.U_c})
    init_uniform_fan_in(*W, rng);
}

}  // namespace rnnfc
