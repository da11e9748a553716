#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "rnnfc/data/csv.hpp"
#include "rnnfc/data/date.hpp"
#include "rnnfc/dense.hpp"

namespace rnnfc {

enum Feature : int { kConfirmed = 0, kDeceased = 1, kRecovered = 2 };
inline constexpr int kFeatureCount = 3;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "confirmed", "deceased", "recovered"};

struct LocationSeries {
  std::string name;
  double id_scalar = 0.0;
  MatrixXd values;  // features x days, rows ordered confirmed, deceased, recovered
  Date start_date;

  Eigen::Index day_count() const { return values.cols(); }
};

struct Dataset {
  std::vector<LocationSeries> locations;
  int day_count = 0;
  Date epoch_date;

  std::size_t size() const { return locations.size(); }
};

// SHA-256 of the UTF-8 name; the first six hex digits read as a 24-bit integer,
// divided by 0xFFFFFF.
double location_id(std::string_view name);
// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

// Sums province rows per country and clips to the half-open window [start, end).
Dataset assemble_dataset(const RawTable& confirmed, const RawTable& deceased,
                         const RawTable& recovered, Date start, Date end);

void write_dataset(const Dataset& dataset, const std::string& path);
Dataset read_dataset(const std::string& path);

}  // namespace rnnfc
