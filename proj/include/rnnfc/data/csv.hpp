#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rnnfc/data/date.hpp"

namespace rnnfc {

struct RawRow {
  std::string region;
  std::string country;
  std::vector<double> values;  // one non-negative count per header date
};

// One JHU time-series table: Province/State, Country/Region, Lat, Long, then dates.
struct RawTable {
  std::vector<Date> dates;
  std::vector<RawRow> rows;
};

// Splits RFC-4180 style CSV into records. Quoted fields may contain commas,
// doubled quotes and newlines. `first_lines` receives each record's 1-based line.
std::vector<std::vector<std::string>> split_csv(std::string_view text,
                                                std::vector<std::size_t>* first_lines = nullptr);

// Throws DataError naming `source` and the line for malformed input.
RawTable parse_jhu_csv(std::string_view text, std::string_view source = "<csv>");

std::string read_text_file(const std::string& path);

}  // namespace rnnfc
