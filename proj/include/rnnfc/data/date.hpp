#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace rnnfc {

using Date = std::chrono::sys_days;

// "3/31/20" -> 2020-03-31. Two-digit years are 20yy.
Date parse_mdy(std::string_view text);
// "2020-03-31".
Date parse_iso(std::string_view text);
std::string to_iso(Date d);
// "31/03/2020", the day-first layout used for fold tables.
std::string to_dmy(Date d);

inline Date make_date(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

inline Date add_days(Date d, long n) { return d + std::chrono::days{n}; }

}  // namespace rnnfc
