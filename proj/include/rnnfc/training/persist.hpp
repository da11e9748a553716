#pragma once

#include <string>

#include "rnnfc/training/train.hpp"

namespace rnnfc {

// Writes `<stem>.bin` (parameter container) and `<stem>.json` (seed, configs,
// loss history).
void save_trained_model(const TrainedModel& model, const std::string& stem);
TrainedModel load_trained_model(const std::string& stem);

}  // namespace rnnfc
