#pragma once

#include <random>
#include <vector>

#include "rnnfc/dense.hpp"

namespace rnnfc::test {

// Packs every tensor visited by p.for_each into one vector.
template <typename P>
VectorXd flatten(const P& p) {
  Eigen::Index n = 0;
  p.for_each([&](const auto& t) { n += t.size(); });
  VectorXd out(n);
  Eigen::Index k = 0;
  p.for_each([&](const auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) out[k++] = t.data()[i];
  });
  return out;
}

template <typename P>
void unflatten(P& p, const VectorXd& flat, Eigen::Index offset = 0) {
  Eigen::Index k = offset;
  p.for_each([&](auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = flat[k++];
  });
}

template <typename P>
void randomize(P& p, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  p.for_each([&](auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = u(rng);
  });
}

inline VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng,
                              double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

inline VectorXd concat(std::initializer_list<VectorXd> parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.size();
  VectorXd out(n);
  Eigen::Index k = 0;
  for (const auto& p : parts) {
    out.segment(k, p.size()) = p;
    k += p.size();
  }
  return out;
}

}  // namespace rnnfc::test
