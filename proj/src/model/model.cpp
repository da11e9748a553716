#include "rnnfc/model/model.hpp"

#include <algorithm>
#include <cctype>

#include "rnnfc/errors.hpp"
#include "rnnfc/numerics/dropout.hpp"

namespace rnnfc {

std::string_view to_string(Architecture a) { return a == Architecture::Gru ? "GRU" : "LSTM"; }

Architecture parse_architecture(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "gru") return Architecture::Gru;
  if (lower == "lstm") return Architecture::Lstm;
  throw UsageError("unknown architecture '" + std::string(text) + "' (expected gru or lstm)");
}

void ModelConfig::validate() const {
  require(hidden_size >= 1, "ModelConfig: hidden_size must be >= 1");
  require(input_features >= 1, "ModelConfig: input_features must be >= 1");
  require(horizon >= 1, "ModelConfig: horizon must be >= 1");
  require(dropout_rate >= 0.0 && dropout_rate < 1.0, "ModelConfig: dropout_rate must lie in [0, 1)");
  require(l1_lambda >= 0.0 && l2_lambda >= 0.0, "ModelConfig: penalty factors must be >= 0");
}

ModelParams ModelParams::zeros(const ModelConfig& config) {
  config.validate();
  ModelParams p;
  if (config.architecture == Architecture::Gru)
    p.encoder = GruCellParams<double>(config.input_features, config.hidden_size);
  else
    p.encoder = LstmCellParams<double>(config.input_features, config.hidden_size);
  p.id_node = Linear<double>(1, 1);
  for (auto& br : p.branches) br = Linear<double>(config.context_size(), config.horizon);
  return p;
}

ModelParams ModelParams::initialize(const ModelConfig& config, Rng& rng) {
  ModelParams p = zeros(config);
  std::visit([&](auto& cell) { init_cell(cell, rng); }, p.encoder);
  init_uniform_fan_in(p.id_node.W, rng);
  for (auto& br : p.branches) init_uniform_fan_in(br.W, rng);
  return p;
}

Eigen::Index ModelParams::hidden_size() const {
  return std::visit([](const auto& cell) { return cell.hidden_size(); }, encoder);
}

Eigen::Index ModelParams::input_features() const {
  return std::visit([](const auto& cell) { return cell.input_size(); }, encoder);
}

Eigen::Index ModelParams::parameter_count() const {
  Eigen::Index n = 0;
  for_each([&](const auto& t) { n += t.size(); });
  return n;
}

VectorXd ModelParams::to_flat() const {
  VectorXd flat(parameter_count());
  Eigen::Index at = 0;
  for_each([&](const auto& t) {
    flat.segment(at, t.size()) = Eigen::Map<const VectorXd>(t.data(), t.size());
    at += t.size();
  });
  return flat;
}

void ModelParams::assign_flat(const VectorXd& flat) {
  require(flat.size() == parameter_count(), "ModelParams::assign_flat: size mismatch");
  Eigen::Index at = 0;
  for_each([&](auto& t) {
    Eigen::Map<VectorXd>(t.data(), t.size()) = flat.segment(at, t.size());
    at += t.size();
  });
}

bool ModelParams::compatible_with(const ModelConfig& config) const {
  return architecture() == config.architecture && hidden_size() == config.hidden_size &&
         input_features() == config.input_features && horizon() == config.horizon;
}

EncodeResult encode(const MatrixXd& series, double id_scalar, const ModelParams& params,
                    double dropout_rate, Rng& rng, bool training) {
  require(series.cols() >= 1, "encode: series must contain at least one day");
  require(series.rows() == params.input_features(), "encode: feature count mismatch");
  const Eigen::Index H = params.hidden_size();
  const auto T = series.cols();

  EncoderCache cache;
  cache.id_scalar = id_scalar;
  VectorXd h;
  if (const auto* gru = std::get_if<GruCellParams<double>>(&params.encoder)) {
    std::vector<GruCache<double>> steps(T);
    h = VectorXd::Zero(H);
    for (Eigen::Index t = 0; t < T; ++t) h = gru_cell_forward<double>(series.col(t), h, *gru, &steps[t]);
    cache.steps = std::move(steps);
  } else {
    const auto& lstm = std::get<LstmCellParams<double>>(params.encoder);
    std::vector<LstmCache<double>> steps(T);
    auto state = LstmState<double>::zeros(H);
    for (Eigen::Index t = 0; t < T; ++t) state = lstm_cell_forward<double>(series.col(t), state, lstm, &steps[t]);
    h = std::move(state.h);
    cache.steps = std::move(steps);
  }

  cache.context_raw.resize(H + 1);
  cache.context_raw.head(H) = h;
  cache.context_raw[H] = params.id_node.W(0, 0) * id_scalar + params.id_node.b[0];
  auto dropped = dropout_forward(cache.context_raw, dropout_rate, rng, training);
  cache.mask = std::move(dropped.mask);
  cache.context = dropped.y;
  return {std::move(dropped.y), std::move(cache)};
}

MatrixXd decode(const VectorXd& context, const ModelParams& params) {
  require(context.size() == params.branches[0].W.cols(),
          "decode: context width does not match branch input width");
  MatrixXd out(params.branches.size(), params.horizon());
  for (std::size_t f = 0; f < params.branches.size(); ++f)
    out.row(f) = linear_forward(context, params.branches[f]).transpose();
  return out;
}

ForwardResult forward(const MatrixXd& series, double id_scalar, const ModelParams& params,
                      const ModelConfig& config, Rng& rng, bool training) {
  require(params.compatible_with(config), "forward: params do not match model config");
  auto enc = encode(series, id_scalar, params, config.dropout_rate, rng, training);
  return {decode(enc.context, params), std::move(enc.cache)};
}

ModelParams backward(const MatrixXd& grad_forecast, const EncoderCache& cache,
                     const ModelParams& params) {
  const Eigen::Index H = params.hidden_size();
  require(grad_forecast.rows() == static_cast<Eigen::Index>(params.branches.size()) &&
              grad_forecast.cols() == params.horizon(),
          "backward: gradient must be features x horizon");
  require(cache.context.size() == H + 1 && cache.mask.size() == H + 1,
          "backward: cache does not match params");

  ModelParams grads = ModelParams::zeros(ModelConfig{params.architecture(), int(H),
                                                     int(params.input_features()),
                                                     int(params.horizon())});
  VectorXd d_context = VectorXd::Zero(H + 1);
  for (std::size_t f = 0; f < params.branches.size(); ++f) {
    const VectorXd g = grad_forecast.row(f).transpose();
    auto lg = linear_backward(g, cache.context, params.branches[f].W);
    grads.branches[f].W = std::move(lg.W);
    grads.branches[f].b = std::move(lg.b);
    d_context += lg.x;
  }
  const VectorXd d_raw = dropout_backward(d_context, cache.mask);
  grads.id_node.W(0, 0) = d_raw[H] * cache.id_scalar;
  grads.id_node.b[0] = d_raw[H];

  VectorXd d_h = d_raw.head(H);
  if (const auto* gru = std::get_if<GruCellParams<double>>(&params.encoder)) {
    const auto* steps = std::get_if<std::vector<GruCache<double>>>(&cache.steps);
    require(steps != nullptr, "backward: cache was produced by a different architecture");
    auto& g = std::get<GruCellParams<double>>(grads.encoder);
    for (auto it = steps->rbegin(); it != steps->rend(); ++it)
      d_h = gru_cell_backward(d_h, *it, *gru, g).h_prev;
  } else {
    const auto& lstm = std::get<LstmCellParams<double>>(params.encoder);
    const auto* steps = std::get_if<std::vector<LstmCache<double>>>(&cache.steps);
    require(steps != nullptr, "backward: cache was produced by a different architecture");
    auto& g = std::get<LstmCellParams<double>>(grads.encoder);
    LstmState<double> d_state{std::move(d_h), VectorXd::Zero(H)};
    for (auto it = steps->rbegin(); it != steps->rend(); ++it)
      d_state = lstm_cell_backward(d_state, *it, lstm, g).prev;
  }
  return grads;
}

WeightRefs<double> regularized_weights(const ModelParams& params) {
  WeightRefs<double> out;
  std::visit(
      [&](const auto& cell) {
        cell.for_each([&](const auto& t) {
          if constexpr (std::is_same_v<std::decay_t<decltype(t)>, MatrixXd>) out.push_back(std::cref(t));
        });
      },
      params.encoder);
  return out;
}

std::vector<MatrixXd*> regularized_weights(ModelParams& params) {
  std::vector<MatrixXd*> out;
  std::visit(
      [&](auto& cell) {
        cell.for_each([&](auto& t) {
          if constexpr (std::is_same_v<std::decay_t<decltype(t)>, MatrixXd>) out.push_back(&t);
        });
      },
      params.encoder);
  return out;
}

}  // namespace rnnfc
