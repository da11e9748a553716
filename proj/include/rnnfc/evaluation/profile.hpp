#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace rnnfc {

enum class SeriesCategory { Smooth, Outlier, Step, Flat };

std::string_view to_string(SeriesCategory c);

struct SeriesProfile {
  SeriesCategory category = SeriesCategory::Smooth;
  std::optional<int> evidence;  // day index of the triggering jump, outlier/step only
};

// Rules on the daily differences d with s = MAD(d) (1 when zero), in order:
//   flat     at least 95% of d are zero
//   outlier  |d_t| > 10 s and the level returns within 2 days to within 2 s of
//            the pre-jump trend
//   step     |d_t| > 10 s without such a return
//   smooth   otherwise
SeriesProfile profile_series(std::span<const double> series);

inline constexpr double kFlatShare = 0.95;
inline constexpr double kJumpMads = 10.0;
inline constexpr double kRevertMads = 2.0;
inline constexpr int kRevertDays = 2;

}  // namespace rnnfc
