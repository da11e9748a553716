#include "rnnfc/training/persist.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rnnfc/errors.hpp"
#include "rnnfc/model/serialize.hpp"

namespace rnnfc {

void save_trained_model(const TrainedModel& model, const std::string& stem) {
  save_params(model.params, stem + ".bin");
  nlohmann::json j;
  j["seed"] = model.seed;
  j["fold"] = model.fold_index;
  j["model"] = {{"architecture", std::string(to_string(model.model_config.architecture))},
                {"hidden_size", model.model_config.hidden_size},
                {"input_features", model.model_config.input_features},
                {"horizon", model.model_config.horizon}};
  j["regulariser"] = {{"label", model.regularizer.label},
                      {"l1", model.regularizer.l1_lambda},
                      {"l2", model.regularizer.l2_lambda},
                      {"dropout", model.regularizer.dropout_rate}};
  j["train"] = {{"epochs", model.train_config.epochs},
                {"learning_rate", model.train_config.learning_rate},
                {"ensemble_size", model.train_config.ensemble_size},
                {"base_seed", model.train_config.base_seed},
                {"batch_size", model.train_config.batch_size}};
  j["loss_history"] = model.loss_history;
  const std::string path = stem + ".json";
  {
    std::ofstream out(path + ".tmp");
    if (!out) throw DataError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(path + ".tmp", path);
}

TrainedModel load_trained_model(const std::string& stem) {
  TrainedModel m;
  m.params = load_params(stem + ".bin");
  std::ifstream in(stem + ".json");
  if (!in) throw DataError("cannot open '" + stem + ".json'");
  try {
    const auto j = nlohmann::json::parse(in);
    m.seed = j.at("seed").get<std::uint64_t>();
    m.fold_index = j.at("fold").get<int>();
    const auto& mj = j.at("model");
    m.model_config.architecture = parse_architecture(mj.at("architecture").get<std::string>());
    m.model_config.hidden_size = mj.at("hidden_size").get<int>();
    m.model_config.input_features = mj.at("input_features").get<int>();
    m.model_config.horizon = mj.at("horizon").get<int>();
    const auto& rj = j.at("regulariser");
    m.regularizer = {rj.at("label").get<std::string>(), rj.at("l1").get<double>(),
                     rj.at("l2").get<double>(), rj.at("dropout").get<double>()};
    m.model_config = apply_regularizer(m.model_config, m.regularizer);
    const auto& tj = j.at("train");
    m.train_config.epochs = tj.at("epochs").get<int>();
    m.train_config.learning_rate = tj.at("learning_rate").get<double>();
    m.train_config.ensemble_size = tj.at("ensemble_size").get<int>();
    m.train_config.base_seed = tj.at("base_seed").get<std::uint64_t>();
    m.train_config.batch_size = tj.at("batch_size").get<int>();
    m.loss_history = j.at("loss_history").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("model sidecar '" + stem + ".json': " + e.what());
  }
  if (!m.params.compatible_with(m.model_config))
    throw SchemaError("model sidecar '" + stem + ".json' does not match its parameter container");
  return m;
}

}  // namespace rnnfc
