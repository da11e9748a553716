#pragma once

#include "rnnfc/data/dataset.hpp"
#include "rnnfc/dense.hpp"

namespace rnnfc {

// Half-open range of day indices.
struct DayRange {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  friend bool operator==(const DayRange&, const DayRange&) = default;
};

// Per-location, per-feature z-score parameters. Row l holds location l.
struct StandardScaler {
  MatrixXd means;  // locations x features
  MatrixXd stds;   // locations x features, strictly positive
};

StandardScaler fit_scaler(const Dataset& dataset, DayRange train_range);

// Scales a features x days block of location `location`.
MatrixXd standardize(const MatrixXd& series, const StandardScaler& scaler, Eigen::Index location);
MatrixXd inverse_standardize(const MatrixXd& series, const StandardScaler& scaler,
                             Eigen::Index location);

}  // namespace rnnfc
