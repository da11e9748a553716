#pragma once

#include <vector>

#include "rnnfc/data/date.hpp"
#include "rnnfc/data/scaler.hpp"

namespace rnnfc {

// One forward-chaining fold: the training window grows by one horizon per fold,
// validation and test windows follow it.
struct Fold {
  int index = 0;
  DayRange train;
  DayRange validation;
  DayRange test;
  Date test_start_date;
};

std::vector<Fold> make_folds(int day_count, int horizon, Date epoch_date);

}  // namespace rnnfc
