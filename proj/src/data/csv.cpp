#include "rnnfc/data/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rnnfc/errors.hpp"

namespace rnnfc {

std::vector<std::vector<std::string>> split_csv(std::string_view text,
                                                std::vector<std::size_t>* first_lines) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool record_open = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    if (first_lines) first_lines->push_back(record_line);
    record_open = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (!record_open) {
      record_open = true;
      record_line = line;
    }
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(ch);
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field starting on line " +
                                 std::to_string(record_line));
  if (record_open) end_record();
  return records;
}

namespace {

double parse_count(const std::string& cell, std::string_view source, std::size_t line) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v) || v < 0.0) {
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ": invalid count '" +
                    cell + "'");
  }
  return v;
}

}  // namespace

RawTable parse_jhu_csv(std::string_view text, std::string_view source) {
  std::vector<std::size_t> lines;
  auto records = split_csv(text, &lines);
  // Trailing blank lines produce single empty fields.
  while (!records.empty() && records.back().size() == 1 && records.back()[0].empty()) {
    records.pop_back();
    lines.pop_back();
  }
  if (records.empty()) throw SchemaError(std::string(source) + ": empty file, expected a header");

  const auto& header = records.front();
  if (header.size() < 5) {
    throw SchemaError(std::string(source) +
                    ":1: header needs Province/State, Country/Region, Lat, Long and dates");
  }
  RawTable table;
  for (std::size_t c = 4; c < header.size(); ++c) {
    Date d;
    try {
      d = parse_mdy(header[c]);
    } catch (const DataError& e) {
      throw SchemaError(std::string(source) + ":1: " + e.what());
    }
    if (!table.dates.empty() && d != table.dates.back() + std::chrono::days{1}) {
      throw SchemaError(std::string(source) + ":1: date header not consecutive at '" + header[c] +
                      "'");
    }
    table.dates.push_back(d);
  }

  table.rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw ParseError(std::string(source) + ":" + std::to_string(lines[r]) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(rec.size()));
    }
    RawRow row{rec[0], rec[1], {}};
    row.values.reserve(table.dates.size());
    for (std::size_t c = 4; c < rec.size(); ++c) row.values.push_back(parse_count(rec[c], source, lines[r]));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rnnfc
