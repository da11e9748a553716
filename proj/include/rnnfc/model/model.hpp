#pragma once

#include <array>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rnnfc/data/date.hpp"
#include "rnnfc/dense.hpp"
#include "rnnfc/numerics/linear.hpp"
#include "rnnfc/numerics/penalty.hpp"
#include "rnnfc/numerics/recurrent.hpp"

namespace rnnfc {

using Rng = std::mt19937_64;

enum class Architecture { Gru, Lstm };

std::string_view to_string(Architecture a);
// Accepts "gru"/"lstm" in any case.
Architecture parse_architecture(std::string_view text);

struct ModelConfig {
  Architecture architecture = Architecture::Gru;
  int hidden_size = 20;
  int input_features = 3;
  int horizon = 28;
  double dropout_rate = 0.0;
  double l1_lambda = 0.0;
  double l2_lambda = 0.0;

  void validate() const;
  int context_size() const { return hidden_size + 1; }
};

// Encoder cell, the affine ID node, and one affine decoder branch per feature.
struct ModelParams {
  std::variant<GruCellParams<double>, LstmCellParams<double>> encoder;
  Linear<double> id_node;                 // 1 -> 1
  std::array<Linear<double>, 3> branches;  // context -> horizon

  static ModelParams zeros(const ModelConfig& config);
  // Encoder, ID node and branch weights uniform in +-1/sqrt(fan_in); biases zero.
  static ModelParams initialize(const ModelConfig& config, Rng& rng);

  Architecture architecture() const {
    return encoder.index() == 0 ? Architecture::Gru : Architecture::Lstm;
  }
  Eigen::Index hidden_size() const;
  Eigen::Index input_features() const;
  Eigen::Index horizon() const { return branches[0].W.rows(); }

  // Visits every tensor: encoder (cell order), ID node W and b, then each branch W and b.
  template <typename F>
  void for_each(F&& f) {
    std::visit([&](auto& cell) { cell.for_each(f); }, encoder);
    f(id_node.W);
    f(id_node.b);
    for (auto& br : branches) {
      f(br.W);
      f(br.b);
    }
  }
  template <typename F>
  void for_each(F&& f) const {
    std::visit([&](const auto& cell) { cell.for_each(f); }, encoder);
    f(id_node.W);
    f(id_node.b);
    for (const auto& br : branches) {
      f(br.W);
      f(br.b);
    }
  }

  Eigen::Index parameter_count() const;
  VectorXd to_flat() const;
  // Overwrites every tensor from a flat vector laid out as in for_each.
  void assign_flat(const VectorXd& flat);

  // Matches the architecture and sizes in `config`.
  bool compatible_with(const ModelConfig& config) const;
};

// A forecast in original or standardised units, rows confirmed/deceased/recovered.
struct Forecast {
  std::string location;
  Date first_forecast_date;
  MatrixXd values;  // 3 x horizon
};

struct EncoderCache {
  std::variant<std::vector<GruCache<double>>, std::vector<LstmCache<double>>> steps;
  double id_scalar = 0.0;
  VectorXd context_raw;  // before dropout
  VectorXd mask;
  VectorXd context;
};

struct EncodeResult {
  VectorXd context;
  EncoderCache cache;
};

EncodeResult encode(const MatrixXd& series, double id_scalar, const ModelParams& params,
                    double dropout_rate, Rng& rng, bool training);

MatrixXd decode(const VectorXd& context, const ModelParams& params);

struct ForwardResult {
  MatrixXd forecast;  // 3 x horizon
  EncoderCache cache;
};

ForwardResult forward(const MatrixXd& series, double id_scalar, const ModelParams& params,
                      const ModelConfig& config, Rng& rng, bool training);

// Backpropagation through the branches, dropout, ID node and the unrolled encoder.
ModelParams backward(const MatrixXd& grad_forecast, const EncoderCache& cache,
                     const ModelParams& params);

// Encoder input and recurrent matrices; no biases, ID node or decoder weights.
WeightRefs<double> regularized_weights(const ModelParams& params);
std::vector<MatrixXd*> regularized_weights(ModelParams& params);

}  // namespace rnnfc
