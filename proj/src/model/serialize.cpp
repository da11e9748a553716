#include "rnnfc/model/serialize.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "rnnfc/errors.hpp"

namespace rnnfc {
namespace {

constexpr char kMagic[8] = {'R', 'N', 'N', 'F', 'C', 'P', 'A', 'R'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "parameter container assumes a little-endian host");

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T take(const std::vector<std::uint8_t>& in, std::size_t& at) {
  if (at + sizeof(T) > in.size()) throw DataError("parameter container truncated");
  T v;
  std::memcpy(&v, in.data() + at, sizeof(T));
  at += sizeof(T);
  return v;
}

}  // namespace

std::vector<std::uint8_t> params_to_bytes(const ModelParams& params) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, params.architecture() == Architecture::Gru ? 0u : 1u);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.hidden_size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.horizon()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.input_features()));
  const VectorXd flat = params.to_flat();
  put<std::uint64_t>(out, static_cast<std::uint64_t>(flat.size()));
  for (Eigen::Index i = 0; i < flat.size(); ++i) put<double>(out, flat[i]);
  return out;
}

ModelParams params_from_bytes(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw DataError("not a parameter container (bad magic)");
  std::size_t at = sizeof kMagic;
  if (take<std::uint32_t>(bytes, at) != kVersion)
    throw DataError("unsupported parameter container version");
  const auto arch = take<std::uint32_t>(bytes, at);
  if (arch > 1) throw DataError("unknown architecture tag in parameter container");
  ModelConfig config;
  config.architecture = arch == 0 ? Architecture::Gru : Architecture::Lstm;
  config.hidden_size = static_cast<int>(take<std::uint32_t>(bytes, at));
  config.horizon = static_cast<int>(take<std::uint32_t>(bytes, at));
  config.input_features = static_cast<int>(take<std::uint32_t>(bytes, at));
  ModelParams params;
  try {
    params = ModelParams::zeros(config);
  } catch (const UsageError& e) {
    throw DataError(std::string("invalid shape manifest: ") + e.what());
  }
  const auto count = take<std::uint64_t>(bytes, at);
  if (count != static_cast<std::uint64_t>(params.parameter_count()))
    throw DataError("parameter count does not match shape manifest");
  VectorXd flat(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat[i] = take<double>(bytes, at);
  if (at != bytes.size()) throw DataError("trailing bytes after parameter container");
  params.assign_flat(flat);
  return params;
}

void save_params(const ModelParams& params, const std::string& path) {
  const auto bytes = params_to_bytes(params);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  std::filesystem::rename(tmp, path);
}

ModelParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return params_from_bytes(bytes);
}

}  // namespace rnnfc
