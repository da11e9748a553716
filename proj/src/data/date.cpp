#include "rnnfc/data/date.hpp"

#include <charconv>
#include <cstdio>

#include "rnnfc/errors.hpp"

namespace rnnfc {
namespace {

int to_int(std::string_view s, std::string_view whole) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw DataError("invalid date '" + std::string(whole) + "'");
  return v;
}

Date checked(int y, int m, int d, std::string_view whole) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (m < 1 || d < 1 || !ymd.ok()) throw DataError("invalid date '" + std::string(whole) + "'");
  return Date{ymd};
}

}  // namespace

Date parse_mdy(std::string_view text) {
  const auto a = text.find('/');
  const auto b = a == std::string_view::npos ? a : text.find('/', a + 1);
  if (b == std::string_view::npos) throw DataError("invalid date '" + std::string(text) + "'");
  const int m = to_int(text.substr(0, a), text);
  const int d = to_int(text.substr(a + 1, b - a - 1), text);
  const auto ys = text.substr(b + 1);
  int y = to_int(ys, text);
  if (ys.size() <= 2) y += 2000;
  return checked(y, m, d, text);
}

Date parse_iso(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw DataError("invalid ISO date '" + std::string(text) + "'");
  return checked(to_int(text.substr(0, 4), text), to_int(text.substr(5, 2), text),
                 to_int(text.substr(8, 2), text), text);
}

std::string to_iso(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

std::string to_dmy(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02u/%02u/%04d", unsigned(ymd.day()), unsigned(ymd.month()),
                int(ymd.year()));
  return buf;
}

}  // namespace rnnfc
