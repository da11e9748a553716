#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnnfc/model/model.hpp"

namespace rnnfc {

// Binary parameter container:
//   "RNNFCPAR" | u32 version | u32 arch (0 gru, 1 lstm) | u32 hidden | u32 horizon
//   | u32 features | u64 count | count little-endian IEEE-754 doubles (for_each order)
std::vector<std::uint8_t> params_to_bytes(const ModelParams& params);
ModelParams params_from_bytes(const std::vector<std::uint8_t>& bytes);

void save_params(const ModelParams& params, const std::string& path);
ModelParams load_params(const std::string& path);

}  // namespace rnnfc
