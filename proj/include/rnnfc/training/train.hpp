#pragma once

#include <cstdint>
#include <vector>

#include "rnnfc/data/dataset.hpp"
#include "rnnfc/data/folds.hpp"
#include "rnnfc/model/model.hpp"
#include "rnnfc/training/regularizer.hpp"

namespace rnnfc {

struct TrainConfig {
  int epochs = 300;
  double learning_rate = 0.001;
  int ensemble_size = 10;
  std::uint64_t base_seed = 0;
  int batch_size = 0;  // 0 means full batch over all locations

  void validate() const;
};

struct TrainedModel {
  ModelParams params;
  std::vector<double> loss_history;  // one entry per epoch
  std::uint64_t seed = 0;
  int fold_index = 0;
  ModelConfig model_config;
  RegularizerConfig regularizer;
  TrainConfig train_config;
};

struct PenaltyTerms {
  double value = 0.0;
  ModelParams grads;  // non-zero only in the regularised encoder weights
};

PenaltyTerms penalty_terms(const ModelParams& params, const RegularizerConfig& reg);

struct TotalLoss {
  double value = 0.0;
  double mse = 0.0;
  double penalty = 0.0;
  MatrixXd grad_pred;
  ModelParams grad_params;  // penalty contribution
};

// MSE plus the L1 and L2 penalties on the encoder weights. Dropout is applied in
// the forward pass and does not appear here.
TotalLoss total_loss(const MatrixXd& pred, const MatrixXd& target, const ModelParams& params,
                     const RegularizerConfig& reg);

// `model_config` supplies architecture and sizes; its penalty and dropout fields
// are overwritten from `reg`.
ModelConfig apply_regularizer(ModelConfig model_config, const RegularizerConfig& reg);

// Inputs are the standardised training window, targets the standardised
// validation window, both scaled by statistics of the training window.
struct TrainingSet {
  std::vector<MatrixXd> inputs;
  std::vector<MatrixXd> targets;
  std::vector<double> ids;
};

TrainingSet make_training_set(const Dataset& dataset, const Fold& fold);

TrainedModel train_model(const Dataset& dataset, const Fold& fold, const ModelConfig& model_config,
                         const RegularizerConfig& reg, const TrainConfig& train_config,
                         std::uint64_t seed);

// Member i uses seed base_seed + i.
std::vector<TrainedModel> train_ensemble(const Dataset& dataset, const Fold& fold,
                                         const ModelConfig& model_config,
                                         const RegularizerConfig& reg,
                                         const TrainConfig& train_config, int jobs = 1);

}  // namespace rnnfc
