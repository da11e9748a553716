#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rnnfc/evaluation/cross_validate.hpp"

namespace rnnfc {

// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumeric = 3 };

// Settings from the JSON config file, then overridden by flags.
struct RunConfig {
  std::string confirmed_csv, deceased_csv, recovered_csv;
  std::string start = "2020-02-04";
  std::string end = "2021-04-27";  // exclusive
  std::vector<std::string> architectures = {"gru"};
  std::vector<std::string> regularizers = {"No reg", "L1", "L2", "Dropout", "L1L2", "All reg"};
  TrainConfig train;
  int hidden_size = 20;
  int horizon = 28;
  int jobs = 1;
  int fold = -1;
  int synthetic = 0;  // locations; 0 reads CSV snapshots
  int synthetic_days = 448;
  std::string out_dir = "rnnfc-out";
};

// Reads a config file (JSON object, unknown keys rejected).
RunConfig load_run_config(const std::string& path);

// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "RNNFC_CONFIG";

// Runs one CLI invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rnnfc
