#include "rnnfc/data/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "rnnfc/errors.hpp"

namespace rnnfc {
namespace {

using CountryTotals = std::map<std::string, std::vector<double>>;

CountryTotals sum_by_country(const RawTable& table) {
  CountryTotals totals;
  for (const auto& row : table.rows) {
    auto [it, inserted] = totals.try_emplace(row.country, row.values.size(), 0.0);
    for (std::size_t i = 0; i < row.values.size(); ++i) it->second[i] += row.values[i];
  }
  return totals;
}

std::string missing_names(const CountryTotals& a, const CountryTotals& b) {
  std::string out;
  for (const auto& [name, _] : a) {
    if (!b.count(name)) out += (out.empty() ? "" : ", ") + name;
  }
  return out;
}

}  // namespace

Dataset assemble_dataset(const RawTable& confirmed, const RawTable& deceased,
                         const RawTable& recovered, Date start, Date end) {
  if (confirmed.dates != deceased.dates || confirmed.dates != recovered.dates)
    throw AlignmentError("confirmed, deceased and recovered tables have different date headers");
  if (confirmed.dates.empty()) throw SchemaError("tables contain no date columns");
  if (end <= start)
    throw RangeError("window end " + to_iso(end) + " is not after start " + to_iso(start));
  const Date first = confirmed.dates.front();
  const Date last = confirmed.dates.back();
  if (start < first || end > last + std::chrono::days{1}) {
    throw RangeError("window [" + to_iso(start) + ", " + to_iso(end) + ") lies outside data range " +
                     to_iso(first) + " .. " + to_iso(last));
  }

  const std::array<CountryTotals, kFeatureCount> totals = {
      sum_by_country(confirmed), sum_by_country(deceased), sum_by_country(recovered)};
  for (int f = 1; f < kFeatureCount; ++f) {
    std::string missing = missing_names(totals[0], totals[f]);
    std::string extra = missing_names(totals[f], totals[0]);
    if (!missing.empty() || !extra.empty()) {
      std::string msg = "locations differ between confirmed and " +
                        std::string(kFeatureNames[f]) + " tables:";
      if (!missing.empty()) msg += " missing from " + std::string(kFeatureNames[f]) + ": " + missing + ";";
      if (!extra.empty()) msg += " missing from confirmed: " + extra + ";";
      throw AlignmentError(msg);
    }
  }

  const auto offset = static_cast<int>((start - first).count());
  const auto days = static_cast<int>((end - start).count());
  Dataset ds;
  ds.day_count = days;
  ds.epoch_date = start;
  ds.locations.reserve(totals[0].size());
  for (const auto& [name, _] : totals[0]) {
    LocationSeries loc;
    loc.name = name;
    loc.id_scalar = location_id(name);
    loc.start_date = start;
    loc.values.resize(kFeatureCount, days);
    for (int f = 0; f < kFeatureCount; ++f) {
      const auto& series = totals[f].at(name);
      for (int d = 0; d < days; ++d) loc.values(f, d) = series[offset + d];
    }
    ds.locations.push_back(std::move(loc));
  }
  return ds;
}

void write_dataset(const Dataset& dataset, const std::string& path) {
  nlohmann::json j;
  j["epoch_date"] = to_iso(dataset.epoch_date);
  j["day_count"] = dataset.day_count;
  auto& locs = j["locations"] = nlohmann::json::array();
  for (const auto& loc : dataset.locations) {
    nlohmann::json l;
    l["name"] = loc.name;
    for (int f = 0; f < kFeatureCount; ++f) {
      std::vector<double> row(loc.values.row(f).begin(), loc.values.row(f).end());
      l[std::string(kFeatureNames[f])] = row;
    }
    locs.push_back(std::move(l));
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset cache '" + path + "' (run ingest first)");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    Dataset ds;
    ds.epoch_date = parse_iso(j.at("epoch_date").get<std::string>());
    ds.day_count = j.at("day_count").get<int>();
    for (const auto& l : j.at("locations")) {
      LocationSeries loc;
      loc.name = l.at("name").get<std::string>();
      loc.id_scalar = location_id(loc.name);
      loc.start_date = ds.epoch_date;
      loc.values.resize(kFeatureCount, ds.day_count);
      for (int f = 0; f < kFeatureCount; ++f) {
        const auto row = l.at(std::string(kFeatureNames[f])).get<std::vector<double>>();
        if (static_cast<int>(row.size()) != ds.day_count)
          throw SchemaError("dataset cache '" + path + "': series length mismatch for " + loc.name);
        for (int d = 0; d < ds.day_count; ++d) loc.values(f, d) = row[d];
      }
      ds.locations.push_back(std::move(loc));
    }
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("dataset cache '" + path + "': " + e.what());
  }
}

}  // namespace rnnfc
