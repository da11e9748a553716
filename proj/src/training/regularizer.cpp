#include "rnnfc/training/regularizer.hpp"

#include <cctype>

#include "rnnfc/errors.hpp"

namespace rnnfc {
namespace {

std::string normalize(std::string_view label) {
  std::string out;
  for (unsigned char c : label) {
    if (c == ' ' || c == '-' || c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace

const std::vector<RegularizerConfig>& canonical_regularizers() {
  static const std::vector<RegularizerConfig> table = {
      {"No reg", 0.0, 0.0, 0.0},      {"L1", 0.01, 0.0, 0.0},   {"L2", 0.0, 0.01, 0.0},
      {"Dropout", 0.0, 0.0, 0.2},     {"L1L2", 0.01, 0.01, 0.0}, {"All reg", 0.01, 0.01, 0.2},
  };
  return table;
}

int canonical_index(std::string_view label) {
  const auto key = normalize(label);
  const auto& table = canonical_regularizers();
  for (std::size_t i = 0; i < table.size(); ++i)
    if (normalize(table[i].label) == key) return static_cast<int>(i);
  return static_cast<int>(table.size());
}

const RegularizerConfig& find_regularizer(std::string_view label) {
  const auto i = static_cast<std::size_t>(canonical_index(label));
  const auto& table = canonical_regularizers();
  if (i >= table.size()) {
    throw UsageError("unknown regulariser '" + std::string(label) +
                     "' (expected one of: No reg, L1, L2, Dropout, L1L2, All reg)");
  }
  return table[i];
}

std::string label_slug(std::string_view label) {
  std::string out;
  for (unsigned char c : label) {
    if (std::isalnum(c))
      out.push_back(static_cast<char>(std::tolower(c)));
    else if (!out.empty() && out.back() != '_')
      out.push_back('_');
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

}  // namespace rnnfc
