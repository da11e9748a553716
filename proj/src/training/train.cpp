#include "rnnfc/training/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rnnfc/errors.hpp"
#include "rnnfc/numerics/adam.hpp"
#include "rnnfc/numerics/loss.hpp"
#include "rnnfc/numerics/penalty.hpp"
#include "rnnfc/parallel.hpp"

namespace rnnfc {

void TrainConfig::validate() const {
  require(epochs >= 1, "TrainConfig: epochs must be >= 1");
  require(learning_rate > 0.0, "TrainConfig: learning_rate must be positive");
  require(ensemble_size >= 1, "TrainConfig: ensemble_size must be >= 1");
  require(batch_size >= 0, "TrainConfig: batch_size must be >= 0 (0 = full batch)");
}

ModelConfig apply_regularizer(ModelConfig model_config, const RegularizerConfig& reg) {
  model_config.l1_lambda = reg.l1_lambda;
  model_config.l2_lambda = reg.l2_lambda;
  model_config.dropout_rate = reg.dropout_rate;
  model_config.validate();
  return model_config;
}

PenaltyTerms penalty_terms(const ModelParams& params, const RegularizerConfig& reg) {
  PenaltyTerms out;
  out.grads = ModelParams::zeros(ModelConfig{params.architecture(), int(params.hidden_size()),
                                             int(params.input_features()), int(params.horizon())});
  if (reg.l1_lambda == 0.0 && reg.l2_lambda == 0.0) return out;
  const auto weights = regularized_weights(params);
  auto targets = regularized_weights(out.grads);
  const auto l1 = l1_penalty(weights, reg.l1_lambda);
  const auto l2 = l2_penalty(weights, reg.l2_lambda);
  out.value = l1.value + l2.value;
  for (std::size_t i = 0; i < targets.size(); ++i) *targets[i] = l1.gradient[i] + l2.gradient[i];
  return out;
}

TotalLoss total_loss(const MatrixXd& pred, const MatrixXd& target, const ModelParams& params,
                     const RegularizerConfig& reg) {
  auto mse = mse_loss(pred, target);
  auto pen = penalty_terms(params, reg);
  TotalLoss out;
  out.mse = mse.value;
  out.penalty = pen.value;
  out.value = mse.value + pen.value;
  out.grad_pred = std::move(mse.grad);
  out.grad_params = std::move(pen.grads);
  if (!std::isfinite(out.value)) throw NumericError("total_loss: non-finite loss");
  return out;
}

TrainingSet make_training_set(const Dataset& dataset, const Fold& fold) {
  require(!dataset.locations.empty(), "train: dataset has no locations");
  require(!fold.train.empty() && fold.validation.size() > 0 && fold.train.begin == 0 &&
              fold.validation.begin == fold.train.end && fold.validation.end <= dataset.day_count,
          "train: fold " + std::to_string(fold.index) + " does not fit the dataset");
  const auto scaler = fit_scaler(dataset, fold.train);
  TrainingSet set;
  const auto n = dataset.size();
  set.inputs.reserve(n);
  set.targets.reserve(n);
  for (std::size_t l = 0; l < n; ++l) {
    const auto& values = dataset.locations[l].values;
    const auto li = static_cast<Eigen::Index>(l);
    set.inputs.push_back(standardize(values.middleCols(fold.train.begin, fold.train.size()), scaler, li));
    set.targets.push_back(
        standardize(values.middleCols(fold.validation.begin, fold.validation.size()), scaler, li));
    set.ids.push_back(dataset.locations[l].id_scalar);
  }
  return set;
}

TrainedModel train_model(const Dataset& dataset, const Fold& fold, const ModelConfig& model_config,
                         const RegularizerConfig& reg, const TrainConfig& train_config,
                         std::uint64_t seed) {
  train_config.validate();
  const ModelConfig config = apply_regularizer(model_config, reg);
  require(config.horizon == fold.validation.size(),
          "train: model horizon must equal the fold's validation length");
  require(config.input_features == kFeatureCount, "train: model must take three input features");
  const TrainingSet set = make_training_set(dataset, fold);

  Rng rng(seed);
  TrainedModel out;
  out.params = ModelParams::initialize(config, rng);
  out.seed = seed;
  out.fold_index = fold.index;
  out.model_config = config;
  out.regularizer = reg;
  out.train_config = train_config;
  out.loss_history.reserve(train_config.epochs);

  const auto n = set.inputs.size();
  const std::size_t batch =
      train_config.batch_size == 0 ? n : std::min<std::size_t>(n, train_config.batch_size);
  VectorXd flat = out.params.to_flat();
  AdamState<double> adam(flat.size(), train_config.learning_rate);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < train_config.epochs; ++epoch) {
    if (batch < n) std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      const double scale = 1.0 / static_cast<double>(stop - start);
      VectorXd grad = VectorXd::Zero(flat.size());
      double mse_sum = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t l = order[k];
        auto fwd = forward(set.inputs[l], set.ids[l], out.params, config, rng, true);
        auto mse = mse_loss(fwd.forecast, set.targets[l]);
        if (!std::isfinite(mse.value)) {
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", location '" +
                             dataset.locations[l].name + "'");
        }
        mse_sum += mse.value;
        grad += scale * backward(mse.grad, fwd.cache, out.params).to_flat();
      }
      const auto pen = penalty_terms(out.params, reg);
      grad += pen.grads.to_flat();
      epoch_loss += (mse_sum * scale + pen.value) * static_cast<double>(stop - start);
      adam_step(flat, grad, adam);
      out.params.assign_flat(flat);
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss))
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch));
    out.loss_history.push_back(epoch_loss);
  }
  return out;
}

std::vector<TrainedModel> train_ensemble(const Dataset& dataset, const Fold& fold,
                                         const ModelConfig& model_config,
                                         const RegularizerConfig& reg,
                                         const TrainConfig& train_config, int jobs) {
  train_config.validate();
  std::vector<TrainedModel> members(train_config.ensemble_size);
  parallel_for(members.size(), jobs, [&](std::size_t i) {
    const std::uint64_t seed = train_config.base_seed + i;
    try {
      members[i] = train_model(dataset, fold, model_config, reg, train_config, seed);
    } catch (const NumericError& e) {
      throw NumericError("ensemble member " + std::to_string(i) + ": " + e.what());
    } catch (const UsageError& e) {
      throw UsageError("ensemble member " + std::to_string(i) + ": " + e.what());
    }
  });
  return members;
}

}  // namespace rnnfc
