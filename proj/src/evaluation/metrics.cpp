#include "rnnfc/evaluation/metrics.hpp"

#include <cmath>

#include "rnnfc/errors.hpp"
#include "rnnfc/numerics/activation.hpp"

namespace rnnfc {

double rmse(const MatrixXd& pred, const MatrixXd& actual) {
  require_same_shape(pred, actual, "rmse");
  require(pred.size() > 0, "rmse: empty input");
  const MatrixXd diff = pred - actual;
  const VectorXd per_feature =
      (diff.array().square().rowwise().sum() / double(diff.cols())).sqrt().matrix();
  return per_feature.mean();
}

int percent_change(double baseline, double treatment) {
  if (!(baseline > 0.0)) throw UsageError("percent_change: baseline must be positive");
  return static_cast<int>(std::lround((treatment - baseline) / baseline * 100.0));
}

MatrixXd persistence_forecast(const MatrixXd& history, int horizon) {
  require(history.cols() >= 1, "persistence_forecast: empty history");
  require(horizon >= 1, "persistence_forecast: horizon must be >= 1");
  return history.col(history.cols() - 1).replicate(1, horizon);
}

}  // namespace rnnfc
