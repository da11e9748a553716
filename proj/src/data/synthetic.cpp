#include "rnnfc/data/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "rnnfc/errors.hpp"

namespace rnnfc {
namespace {

struct Wave {
  double size, center, rate;
  double cumulative(double t) const { return size / (1.0 + std::exp(-rate * (t - center))); }
};

// Rounded daily increments of `expected`, jittered multiplicatively.
std::vector<double> noisy_increments(const std::vector<double>& expected, double sigma,
                                     std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> out(expected.size());
  for (std::size_t t = 0; t < expected.size(); ++t)
    out[t] = std::round(expected[t] * std::exp(noise(rng)));
  return out;
}

std::vector<double> lagged(const std::vector<double>& inc, int lag, double fraction) {
  std::vector<double> out(inc.size(), 0.0);
  for (std::size_t t = lag; t < inc.size(); ++t) out[t] = fraction * inc[t - lag];
  return out;
}

}  // namespace

Dataset synthesize_dataset(int n_locations, int day_count, std::uint64_t seed) {
  if (n_locations < 1) throw UsageError("synthesize_dataset: need at least one location");
  if (day_count < 84) throw UsageError("synthesize_dataset: day_count must be at least 84");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

  Dataset ds;
  ds.day_count = day_count;
  ds.epoch_date = make_date(2020, 2, 4);
  const double days = day_count;
  for (int l = 0; l < n_locations; ++l) {
    const double scale = std::pow(10.0, between(3.0, 6.0));
    const Wave first{scale, between(0.15, 0.5) * days, between(0.03, 0.09)};
    const Wave second{scale * between(0.3, 1.5), between(0.55, 0.95) * days, between(0.02, 0.07)};
    const double ripple = between(0.1, 0.3);
    const double phase = between(0.0, 2.0 * std::numbers::pi);

    std::vector<double> expected(day_count);
    for (int t = 0; t < day_count; ++t) {
      const double prev = t == 0 ? 0.0 : first.cumulative(t - 1) + second.cumulative(t - 1);
      const double now = first.cumulative(t) + second.cumulative(t);
      const double weekly = 1.0 + ripple * std::sin(2.0 * std::numbers::pi * t / 7.0 + phase);
      expected[t] = (now - prev) * weekly;
    }
    const auto confirmed_inc = noisy_increments(expected, 0.15, rng);
    const int death_lag = static_cast<int>(between(7.0, 14.0));
    const int recovery_lag = static_cast<int>(between(14.0, 21.0));
    const auto deceased_inc =
        noisy_increments(lagged(confirmed_inc, death_lag, between(0.005, 0.04)), 0.2, rng);
    const auto recovered_inc =
        noisy_increments(lagged(confirmed_inc, recovery_lag, between(0.6, 0.95)), 0.15, rng);

    LocationSeries loc;
    char name[32];
    std::snprintf(name, sizeof name, "Location-%03d", l + 1);
    loc.name = name;
    loc.id_scalar = location_id(loc.name);
    loc.start_date = ds.epoch_date;
    loc.values.resize(kFeatureCount, day_count);
    const std::array<const std::vector<double>*, kFeatureCount> incs = {&confirmed_inc, &deceased_inc,
                                                                       &recovered_inc};
    for (int f = 0; f < kFeatureCount; ++f) {
      double total = 0.0;
      for (int t = 0; t < day_count; ++t) {
        total += (*incs[f])[t];
        loc.values(f, t) = total;
      }
    }
    ds.locations.push_back(std::move(loc));
  }
  return ds;
}

}  // namespace rnnfc
