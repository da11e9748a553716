#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rnnfc {

struct RegularizerConfig {
  std::string label;
  double l1_lambda = 0.0;
  double l2_lambda = 0.0;
  double dropout_rate = 0.0;

  friend bool operator==(const RegularizerConfig&, const RegularizerConfig&) = default;
};

// The six configurations in canonical order:
// No reg, L1, L2, Dropout, L1L2, All reg.
const std::vector<RegularizerConfig>& canonical_regularizers();

// Matches labels ignoring case, spaces, '-' and '_' ("noreg", "all-reg").
const RegularizerConfig& find_regularizer(std::string_view label);

// Position in the canonical list; labels outside it sort last.
int canonical_index(std::string_view label);

// Filesystem-friendly form of a label ("No reg" -> "no_reg").
std::string label_slug(std::string_view label);

}  // namespace rnnfc
