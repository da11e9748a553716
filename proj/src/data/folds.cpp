#include "rnnfc/data/folds.hpp"

#include "rnnfc/errors.hpp"

namespace rnnfc {

std::vector<Fold> make_folds(int day_count, int horizon, Date epoch_date) {
  if (horizon < 1 || day_count < 3 * horizon || (day_count - 2 * horizon) % horizon != 0) {
    throw UsageError("make_folds: day_count (" + std::to_string(day_count) +
                     ") must be at least 3 * horizon and (day_count - 2 * horizon) must be "
                     "divisible by horizon (" + std::to_string(horizon) + ")");
  }
  const int count = day_count / horizon - 2;
  std::vector<Fold> folds;
  folds.reserve(count);
  for (int k = 0; k < count; ++k) {
    Fold f;
    f.index = k;
    f.train = {0, horizon * (k + 1)};
    f.validation = {f.train.end, f.train.end + horizon};
    f.test = {f.validation.end, f.validation.end + horizon};
    f.test_start_date = add_days(epoch_date, f.test.begin);
    folds.push_back(f);
  }
  return folds;
}

}  // namespace rnnfc
