#include "rnnfc/data/scaler.hpp"

#include "rnnfc/errors.hpp"

namespace rnnfc {

StandardScaler fit_scaler(const Dataset& dataset, DayRange train_range) {
  if (train_range.empty() || train_range.begin < 0 || train_range.end > dataset.day_count)
    throw UsageError("fit_scaler: training range must be non-empty and within the dataset");
  const auto n = static_cast<Eigen::Index>(dataset.size());
  StandardScaler s{MatrixXd(n, kFeatureCount), MatrixXd(n, kFeatureCount)};
  for (Eigen::Index l = 0; l < n; ++l) {
    const auto block = dataset.locations[l].values.middleCols(train_range.begin, train_range.size());
    for (int f = 0; f < kFeatureCount; ++f) {
      const double mean = block.row(f).mean();
      const double var = (block.row(f).array() - mean).square().mean();
      const double sd = std::sqrt(var);
      s.means(l, f) = mean;
      s.stds(l, f) = sd > 0.0 ? sd : 1.0;
    }
  }
  return s;
}

namespace {

void check_shape(const MatrixXd& series, const StandardScaler& scaler, Eigen::Index location,
                 const char* what) {
  if (series.rows() != scaler.means.cols() || location < 0 || location >= scaler.means.rows())
    throw UsageError(std::string(what) + ": series/scaler shape mismatch");
}

}  // namespace

MatrixXd standardize(const MatrixXd& series, const StandardScaler& scaler, Eigen::Index location) {
  check_shape(series, scaler, location, "standardize");
  const VectorXd mean = scaler.means.row(location).transpose();
  const VectorXd sd = scaler.stds.row(location).transpose();
  return (series.colwise() - mean).array().colwise() / sd.array();
}

MatrixXd inverse_standardize(const MatrixXd& series, const StandardScaler& scaler,
                             Eigen::Index location) {
  check_shape(series, scaler, location, "inverse_standardize");
  const VectorXd mean = scaler.means.row(location).transpose();
  const VectorXd sd = scaler.stds.row(location).transpose();
  return (series.array().colwise() * sd.array()).matrix().colwise() + mean;
}

}  // namespace rnnfc
