#pragma once

#include <cstdint>

#include "rnnfc/data/dataset.hpp"

namespace rnnfc {

// Deterministic cumulative case curves (two logistic waves, a weekly reporting
// ripple and seeded noise on daily increments). Every feature is non-decreasing.
Dataset synthesize_dataset(int n_locations, int day_count, std::uint64_t seed);

}  // namespace rnnfc
