#include <openssl/evp.h>

#include <cstdint>
#include <memory>

#include "rnnfc/data/dataset.hpp"
#include "rnnfc/errors.hpp"

namespace rnnfc {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

double location_id(std::string_view name) {
  if (name.empty()) throw UsageError("location_id: name must be non-empty");
  const std::string hex = sha256_hex(name).substr(0, 6);
  const auto v = static_cast<std::uint32_t>(std::stoul(hex, nullptr, 16));
  return static_cast<double>(v) / 16777215.0;
}

}  // namespace rnnfc
