#include "rnnfc/evaluation/profile.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rnnfc/errors.hpp"

namespace rnnfc {
namespace {

double median(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  return m;
}

}  // namespace

std::string_view to_string(SeriesCategory c) {
  switch (c) {
    case SeriesCategory::Smooth: return "smooth";
    case SeriesCategory::Outlier: return "outlier";
    case SeriesCategory::Step: return "step";
    case SeriesCategory::Flat: return "flat";
  }
  return "smooth";
}

SeriesProfile profile_series(std::span<const double> x) {
  if (x.size() < 8) throw UsageError("profile_series: need at least 8 days");
  const std::size_t n = x.size();
  std::vector<double> d(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) d[t] = x[t + 1] - x[t];

  const auto zeros = std::count(d.begin(), d.end(), 0.0);
  if (static_cast<double>(zeros) >= kFlatShare * static_cast<double>(d.size()))
    return {SeriesCategory::Flat, std::nullopt};

  const double med = median(d);
  std::vector<double> dev(d.size());
  std::transform(d.begin(), d.end(), dev.begin(), [&](double v) { return std::abs(v - med); });
  double s = median(dev);
  if (s == 0.0) s = 1.0;

  // Jumps are measured against the typical increment so a steady ramp is not a jump.
  std::optional<int> first_step;
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (std::abs(d[t] - med) <= kJumpMads * s) continue;
    const auto day = static_cast<int>(t + 1);
    for (int k = 1; k <= kRevertDays && t + 1 + k < n; ++k) {
      const double trend = x[t] + (k + 1) * med;
      if (std::abs(x[t + 1 + k] - trend) <= kRevertMads * s) return {SeriesCategory::Outlier, day};
    }
    if (!first_step) first_step = day;
  }
  if (first_step) return {SeriesCategory::Step, first_step};
  return {SeriesCategory::Smooth, std::nullopt};
}

}  // namespace rnnfc
