#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rnnfc/data/dataset.hpp"
#include "rnnfc/data/folds.hpp"
#include "rnnfc/model/model.hpp"
#include "rnnfc/training/train.hpp"

namespace rnnfc {

struct Candidate {
  Architecture architecture = Architecture::Gru;
  RegularizerConfig regularizer;

  std::string name() const;  // "GRU+Dropout"
};

struct EnsembleResult {
  int fold = 0;  // -1 for results aggregated over folds
  Architecture architecture = Architecture::Gru;
  std::string regularizer;
  std::vector<double> member_rmse;
  double mean_rmse = 0.0;
  double var_rmse = 0.0;  // population variance
  std::vector<MatrixXd> mean_forecast;  // per location, original scale, 3 x horizon
};

// Fills mean_rmse and var_rmse from member_rmse.
void summarize(EnsembleResult& result);

struct CvRow {
  Fold fold;
  EnsembleResult result;
};

struct CvTable {
  std::vector<CvRow> rows;  // fold-major, candidates in request order
};

// Scaler for forecasting the test window: fitted over the model input
// (training + validation days), never over test days.
StandardScaler evaluation_scaler(const Dataset& dataset, const Fold& fold);

// Evaluation-mode forecasts for every location, inverse-standardised.
std::vector<MatrixXd> forecast_member(const TrainedModel& model, const Dataset& dataset,
                                      const Fold& fold, const StandardScaler& scaler);

// Mean over locations of rmse(forecast, test window).
double score_forecasts(const std::vector<MatrixXd>& forecasts, const Dataset& dataset,
                       const Fold& fold);

double evaluate_member(const TrainedModel& model, const Dataset& dataset, const Fold& fold,
                       const StandardScaler& scaler);

// Same score for the last-value-repeated baseline.
double evaluate_persistence(const Dataset& dataset, const Fold& fold);

EnsembleResult evaluate_ensemble(const std::vector<TrainedModel>& members, const Dataset& dataset,
                                 const Fold& fold, Architecture architecture,
                                 const std::string& regularizer);

struct CvOptions {
  ModelConfig model;              // architecture is taken from each candidate
  int jobs = 1;
  std::string cell_dir;           // when set, completed cells are cached here
  std::vector<int> folds;         // empty means every fold
  bool require_cached = false;    // fail instead of training a missing cell
};

// One ensemble per (fold, candidate). With a cell directory, cells already on
// disk with a matching fingerprint are loaded instead of retrained.
CvTable cross_validate(const Dataset& dataset, const std::vector<Candidate>& candidates,
                       const TrainConfig& train_config, const CvOptions& options);

// Trains (or loads from `cell_dir`) the ensemble of a single cell.
EnsembleResult run_cell(const Dataset& dataset, const Fold& fold, const Candidate& candidate,
                        const TrainConfig& train_config, const CvOptions& options);

// Lowest mean RMSE; means within 1e-9 fall back to lower variance, then to the
// canonical regulariser order and GRU before LSTM.
const EnsembleResult& select_best(const std::vector<EnsembleResult>& results);

// One result per candidate whose member i RMSE is the mean of member i over folds.
std::vector<EnsembleResult> aggregate_over_folds(const CvTable& table);

// fold,test_start,test_end,architecture,regulariser,member,rmse
std::string members_csv(const CvTable& table);
// fold,test_start,test_end,architecture,regulariser,mean_rmse,var_rmse,change_pct
std::string summary_csv(const CvTable& table);

}  // namespace rnnfc
