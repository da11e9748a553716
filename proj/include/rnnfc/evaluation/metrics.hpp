#pragma once

#include "rnnfc/dense.hpp"

namespace rnnfc {

// RMSE of each feature row over the horizon, averaged over features.
double rmse(const MatrixXd& pred, const MatrixXd& actual);

// round((treatment - baseline) / baseline * 100), halves away from zero.
int percent_change(double baseline, double treatment);

// Repeats the last observed column `horizon` times.
MatrixXd persistence_forecast(const MatrixXd& history, int horizon);

}  // namespace rnnfc
