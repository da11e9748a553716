#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "rnnfc/data/csv.hpp"
#include "rnnfc/data/dataset.hpp"
#include "rnnfc/data/synthetic.hpp"
#include "rnnfc/errors.hpp"

using namespace rnnfc;

namespace {

RawTable make_table(Date first, int days, const std::vector<std::pair<std::string, double>>& rows) {
  RawTable t;
  for (int d = 0; d < days; ++d) t.dates.push_back(add_days(first, d));
  for (const auto& [country, slope] : rows) {
    RawRow r;
    r.country = country;
    for (int d = 0; d < days; ++d) r.values.push_back(slope * d);
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace

TEST_CASE("provinces are summed per country", "[dataset]") {
  const Date first = make_date(2020, 1, 22);
  RawTable c = make_table(first, 5, {{"Canada", 1.0}, {"Canada", 2.0}, {"Albania", 1.0}});
  RawTable d = make_table(first, 5, {{"Canada", 0.0}, {"Albania", 0.0}});
  RawTable r = make_table(first, 5, {{"Albania", 0.0}, {"Canada", 0.0}});
  Dataset ds = assemble_dataset(c, d, r, first, add_days(first, 5));
  REQUIRE(ds.size() == 2);
  CHECK(ds.day_count == 5);
  CHECK(ds.locations[0].name == "Albania");
  CHECK(ds.locations[1].name == "Canada");
  CHECK(ds.locations[1].values(kConfirmed, 1) == 3.0);
  CHECK(ds.locations[1].values(kConfirmed, 4) == 12.0);
  CHECK(ds.locations[1].values.rows() == kFeatureCount);
}

TEST_CASE("the window end is exclusive", "[dataset]") {
  const Date first = make_date(2020, 1, 22);
  const Date start = make_date(2020, 2, 4);
  const Date end = make_date(2021, 4, 27);
  const int span = static_cast<int>((end - first).count());
  RawTable t = make_table(first, span, {{"US", 1.0}});
  Dataset ds = assemble_dataset(t, t, t, start, end);
  CHECK(ds.day_count == 448);
  CHECK(ds.epoch_date == start);
  CHECK(ds.locations[0].values(kConfirmed, 0) == static_cast<double>((start - first).count()));
  CHECK(ds.locations[0].values(kConfirmed, 447) == static_cast<double>(span - 1));
}

TEST_CASE("misaligned tables are rejected", "[dataset][errors]") {
  const Date first = make_date(2020, 1, 22);
  RawTable c = make_table(first, 5, {{"Canada", 1.0}, {"Chad", 1.0}});
  RawTable d = make_table(first, 5, {{"Canada", 1.0}});
  SECTION("missing location is named") {
    try {
      assemble_dataset(c, d, c, first, add_days(first, 5));
      FAIL("expected AlignmentError");
    } catch (const AlignmentError& e) {
      CHECK(std::string(e.what()).find("Chad") != std::string::npos);
    }
  }
  SECTION("date headers differ") {
    RawTable shifted = make_table(add_days(first, 1), 5, {{"Canada", 1.0}, {"Chad", 1.0}});
    CHECK_THROWS_AS(assemble_dataset(c, shifted, c, first, add_days(first, 5)), AlignmentError);
  }
}

TEST_CASE("windows outside the data raise RangeError", "[dataset][errors]") {
  const Date first = make_date(2020, 1, 22);
  RawTable t = make_table(first, 10, {{"Chad", 1.0}});
  CHECK_THROWS_AS(assemble_dataset(t, t, t, add_days(first, 3), add_days(first, 3)), RangeError);
  CHECK_THROWS_AS(assemble_dataset(t, t, t, add_days(first, -1), add_days(first, 3)), RangeError);
  CHECK_THROWS_AS(assemble_dataset(t, t, t, first, add_days(first, 11)), RangeError);
  CHECK_NOTHROW(assemble_dataset(t, t, t, first, add_days(first, 10)));
}

TEST_CASE("location_id matches frozen digests", "[dataset][id]") {
  CHECK(location_id("US") == Catch::Approx(0.6059598091816788).epsilon(1e-15));
  CHECK(location_id("Australia") == Catch::Approx(0.7575569604371166).epsilon(1e-15));
  CHECK(location_id("Korea, South") == Catch::Approx(0.6870840005328656).epsilon(1e-15));
  CHECK(location_id("Diamond Princess") == Catch::Approx(0.2027574898456031).epsilon(1e-15));
  CHECK(location_id("Location-001") == Catch::Approx(0.4918942148622402).epsilon(1e-15));
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("location_id is injective over the JHU country list", "[dataset][id]") {
  std::ifstream in(RNNFC_TEST_DATA_DIR "/jhu_locations.txt");
  REQUIRE(in);
  std::set<double> ids;
  std::size_t n = 0;
  for (std::string name; std::getline(in, name);) {
    if (name.empty()) continue;
    ++n;
    const double id = location_id(name);
    CHECK(id >= 0.0);
    CHECK(id <= 1.0);
    ids.insert(id);
  }
  CHECK(n == 192);
  CHECK(ids.size() == n);
}

TEST_CASE("dataset cache round-trips", "[dataset][io]") {
  Dataset ds = synthesize_dataset(3, 84, 11);
  const auto path = std::filesystem::temp_directory_path() / "rnnfc_test_dataset.json";
  write_dataset(ds, path.string());
  Dataset back = read_dataset(path.string());
  std::filesystem::remove(path);
  REQUIRE(back.size() == ds.size());
  CHECK(back.day_count == ds.day_count);
  CHECK(back.epoch_date == ds.epoch_date);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.locations[i].name == ds.locations[i].name);
    CHECK(back.locations[i].id_scalar == ds.locations[i].id_scalar);
    CHECK(back.locations[i].values == ds.locations[i].values);
  }
  CHECK_THROWS_AS(read_dataset(path.string()), DataError);
}
