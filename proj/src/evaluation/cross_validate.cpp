#include "rnnfc/evaluation/cross_validate.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "rnnfc/errors.hpp"
#include "rnnfc/evaluation/metrics.hpp"
#include "rnnfc/parallel.hpp"

namespace rnnfc {

std::string Candidate::name() const {
  return std::string(to_string(architecture)) + "+" + regularizer.label;
}

void summarize(EnsembleResult& r) {
  require(!r.member_rmse.empty(), "summarize: ensemble has no members");
  const double n = static_cast<double>(r.member_rmse.size());
  double sum = 0.0;
  for (double v : r.member_rmse) sum += v;
  r.mean_rmse = sum / n;
  double sq = 0.0;
  for (double v : r.member_rmse) sq += (v - r.mean_rmse) * (v - r.mean_rmse);
  r.var_rmse = sq / n;
}

StandardScaler evaluation_scaler(const Dataset& dataset, const Fold& fold) {
  return fit_scaler(dataset, {0, fold.validation.end});
}

std::vector<MatrixXd> forecast_member(const TrainedModel& model, const Dataset& dataset,
                                      const Fold& fold, const StandardScaler& scaler) {
  const auto n = static_cast<Eigen::Index>(dataset.size());
  if (scaler.means.rows() != n || scaler.means.cols() != kFeatureCount)
    throw UsageError("evaluate: a scaler fitted on this dataset is required");
  require(fold.test.end <= dataset.day_count, "evaluate: test window exceeds the dataset");
  const DayRange input{0, fold.validation.end};
  Rng unused(0);
  std::vector<MatrixXd> out;
  out.reserve(dataset.size());
  for (Eigen::Index l = 0; l < n; ++l) {
    const auto& loc = dataset.locations[l];
    const MatrixXd x = standardize(loc.values.middleCols(input.begin, input.size()), scaler, l);
    auto fwd = forward(x, loc.id_scalar, model.params, model.model_config, unused, false);
    out.push_back(inverse_standardize(fwd.forecast, scaler, l));
  }
  return out;
}

double score_forecasts(const std::vector<MatrixXd>& forecasts, const Dataset& dataset,
                       const Fold& fold) {
  require(forecasts.size() == dataset.size(), "score: one forecast per location required");
  double total = 0.0;
  for (std::size_t l = 0; l < forecasts.size(); ++l) {
    const MatrixXd actual = dataset.locations[l].values.middleCols(fold.test.begin, fold.test.size());
    total += rmse(forecasts[l], actual);
  }
  const double mean = total / static_cast<double>(forecasts.size());
  if (!std::isfinite(mean)) throw NumericError("evaluate: non-finite RMSE on fold " + std::to_string(fold.index));
  return mean;
}

double evaluate_member(const TrainedModel& model, const Dataset& dataset, const Fold& fold,
                       const StandardScaler& scaler) {
  return score_forecasts(forecast_member(model, dataset, fold, scaler), dataset, fold);
}

double evaluate_persistence(const Dataset& dataset, const Fold& fold) {
  std::vector<MatrixXd> forecasts;
  for (const auto& loc : dataset.locations)
    forecasts.push_back(persistence_forecast(loc.values.leftCols(fold.validation.end), fold.test.size()));
  return score_forecasts(forecasts, dataset, fold);
}

EnsembleResult evaluate_ensemble(const std::vector<TrainedModel>& members, const Dataset& dataset,
                                 const Fold& fold, Architecture architecture,
                                 const std::string& regularizer) {
  require(!members.empty(), "evaluate_ensemble: no members");
  EnsembleResult r;
  r.fold = fold.index;
  r.architecture = architecture;
  r.regularizer = regularizer;
  const auto scaler = evaluation_scaler(dataset, fold);
  for (const auto& m : members) {
    auto forecasts = forecast_member(m, dataset, fold, scaler);
    r.member_rmse.push_back(score_forecasts(forecasts, dataset, fold));
    if (r.mean_forecast.empty()) {
      r.mean_forecast = std::move(forecasts);
    } else {
      for (std::size_t l = 0; l < forecasts.size(); ++l) r.mean_forecast[l] += forecasts[l];
    }
  }
  for (auto& f : r.mean_forecast) f /= static_cast<double>(members.size());
  summarize(r);
  return r;
}

namespace {

std::string fingerprint(const Dataset& dataset, const TrainConfig& tc, const ModelConfig& mc,
                        const RegularizerConfig& reg) {
  std::ostringstream s;
  s.precision(17);
  s << "v1|" << dataset.size() << '|' << dataset.day_count << '|' << to_iso(dataset.epoch_date)
    << '|' << tc.epochs << '|' << tc.learning_rate << '|' << tc.ensemble_size << '|' << tc.base_seed
    << '|' << tc.batch_size << '|' << mc.hidden_size << '|' << mc.horizon << '|' << reg.l1_lambda
    << '|' << reg.l2_lambda << '|' << reg.dropout_rate;
  for (const auto& loc : dataset.locations) {
    s << '|' << loc.name;
    for (Eigen::Index i = 0; i < loc.values.size(); ++i) s << ',' << loc.values.data()[i];
  }
  return sha256_hex(s.str());
}

std::string cell_path(const std::string& dir, int fold, const Candidate& c) {
  return dir + "/fold" + std::to_string(fold) + "_" + label_slug(to_string(c.architecture)) + "_" +
         label_slug(c.regularizer.label) + ".json";
}

std::optional<EnsembleResult> load_cell(const std::string& path, const std::string& print) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("fingerprint").get<std::string>() != print) return std::nullopt;
    EnsembleResult r;
    r.fold = j.at("fold").get<int>();
    r.architecture = parse_architecture(j.at("architecture").get<std::string>());
    r.regularizer = j.at("regulariser").get<std::string>();
    r.member_rmse = j.at("member_rmse").get<std::vector<double>>();
    const int rows = j.at("forecast_rows").get<int>();
    const int cols = j.at("forecast_cols").get<int>();
    for (const auto& f : j.at("mean_forecast")) {
      const auto flat = f.get<std::vector<double>>();
      if (static_cast<int>(flat.size()) != rows * cols) return std::nullopt;
      r.mean_forecast.push_back(Eigen::Map<const MatrixXd>(flat.data(), rows, cols));
    }
    summarize(r);
    return r;
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable or partial cell: recompute
  }
}

void store_cell(const std::string& path, const std::string& print, const EnsembleResult& r) {
  nlohmann::json j;
  j["fingerprint"] = print;
  j["fold"] = r.fold;
  j["architecture"] = std::string(to_string(r.architecture));
  j["regulariser"] = r.regularizer;
  j["member_rmse"] = r.member_rmse;
  j["forecast_rows"] = r.mean_forecast.empty() ? 0 : r.mean_forecast[0].rows();
  j["forecast_cols"] = r.mean_forecast.empty() ? 0 : r.mean_forecast[0].cols();
  auto& mf = j["mean_forecast"] = nlohmann::json::array();
  for (const auto& f : r.mean_forecast) mf.push_back(std::vector<double>(f.data(), f.data() + f.size()));
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

EnsembleResult run_cell(const Dataset& dataset, const Fold& fold, const Candidate& candidate,
                        const TrainConfig& train_config, const CvOptions& options) {
  ModelConfig mc = options.model;
  mc.architecture = candidate.architecture;
  std::string path, print;
  if (!options.cell_dir.empty()) {
    print = fingerprint(dataset, train_config, mc, candidate.regularizer);
    path = cell_path(options.cell_dir, fold.index, candidate);
    if (auto cached = load_cell(path, print)) return *std::move(cached);
  }
  if (options.require_cached) {
    throw UsageError("fold " + std::to_string(fold.index) + ", " + candidate.name() +
                     ": no completed cross-validation cell (run cv first)");
  }
  try {
    const auto members = train_ensemble(dataset, fold, mc, candidate.regularizer, train_config);
    auto r = evaluate_ensemble(members, dataset, fold, candidate.architecture, candidate.regularizer.label);
    if (!path.empty()) store_cell(path, print, r);
    return r;
  } catch (const NumericError& e) {
    throw NumericError("fold " + std::to_string(fold.index) + ", " + candidate.name() + ": " + e.what());
  } catch (const UsageError& e) {
    throw UsageError("fold " + std::to_string(fold.index) + ", " + candidate.name() + ": " + e.what());
  }
}

CvTable cross_validate(const Dataset& dataset, const std::vector<Candidate>& candidates,
                       const TrainConfig& train_config, const CvOptions& options) {
  require(!candidates.empty(), "cross_validate: no candidates");
  train_config.validate();
  const auto all = make_folds(dataset.day_count, options.model.horizon, dataset.epoch_date);
  std::vector<Fold> folds;
  if (options.folds.empty()) {
    folds = all;
  } else {
    for (int k : options.folds) {
      require(k >= 0 && k < static_cast<int>(all.size()),
              "cross_validate: fold " + std::to_string(k) + " out of range");
      folds.push_back(all[k]);
    }
  }
  if (!options.cell_dir.empty()) std::filesystem::create_directories(options.cell_dir);

  CvTable table;
  table.rows.resize(folds.size() * candidates.size());
  parallel_for(table.rows.size(), options.jobs, [&](std::size_t i) {
    const auto& fold = folds[i / candidates.size()];
    const auto& cand = candidates[i % candidates.size()];
    table.rows[i] = {fold, run_cell(dataset, fold, cand, train_config, options)};
  });
  return table;
}

const EnsembleResult& select_best(const std::vector<EnsembleResult>& results) {
  require(!results.empty(), "select_best: no results");
  auto better = [](const EnsembleResult& a, const EnsembleResult& b) {
    if (std::abs(a.mean_rmse - b.mean_rmse) > 1e-9) return a.mean_rmse < b.mean_rmse;
    if (std::abs(a.var_rmse - b.var_rmse) > 1e-9) return a.var_rmse < b.var_rmse;
    const int ia = canonical_index(a.regularizer), ib = canonical_index(b.regularizer);
    if (ia != ib) return ia < ib;
    if (a.regularizer != b.regularizer) return a.regularizer < b.regularizer;
    return a.architecture == Architecture::Gru && b.architecture != Architecture::Gru;
  };
  const EnsembleResult* best = &results.front();
  for (const auto& r : results)
    if (better(r, *best)) best = &r;
  return *best;
}

std::vector<EnsembleResult> aggregate_over_folds(const CvTable& table) {
  std::map<std::pair<int, std::string>, std::vector<const EnsembleResult*>> groups;
  std::vector<std::pair<int, std::string>> order;
  for (const auto& row : table.rows) {
    const auto key = std::make_pair(static_cast<int>(row.result.architecture), row.result.regularizer);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&row.result);
  }
  std::vector<EnsembleResult> out;
  for (const auto& key : order) {
    const auto& rs = groups[key];
    EnsembleResult agg;
    agg.fold = -1;
    agg.architecture = rs.front()->architecture;
    agg.regularizer = rs.front()->regularizer;
    const auto members = rs.front()->member_rmse.size();
    agg.member_rmse.assign(members, 0.0);
    for (const auto* r : rs) {
      require(r->member_rmse.size() == members, "aggregate_over_folds: ensemble sizes differ");
      for (std::size_t i = 0; i < members; ++i) agg.member_rmse[i] += r->member_rmse[i];
    }
    for (auto& v : agg.member_rmse) v /= static_cast<double>(rs.size());
    summarize(agg);
    out.push_back(std::move(agg));
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string row_prefix(const CvRow& row) {
  return std::to_string(row.fold.index) + "," + to_iso(row.fold.test_start_date) + "," +
         to_iso(add_days(row.fold.test_start_date, row.fold.test.size())) + "," +
         std::string(to_string(row.result.architecture)) + "," + row.result.regularizer;
}

}  // namespace

std::string members_csv(const CvTable& table) {
  std::string out = "fold,test_start,test_end,architecture,regulariser,member,rmse\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.result.member_rmse.size(); ++i)
      out += row_prefix(row) + "," + std::to_string(i) + "," + fmt(row.result.member_rmse[i]) + "\n";
  }
  return out;
}

std::string summary_csv(const CvTable& table) {
  std::map<std::pair<int, int>, double> baseline;  // (fold, arch) -> No reg mean
  for (const auto& row : table.rows)
    if (canonical_index(row.result.regularizer) == 0)
      baseline[{row.fold.index, static_cast<int>(row.result.architecture)}] = row.result.mean_rmse;

  std::string out = "fold,test_start,test_end,architecture,regulariser,mean_rmse,var_rmse,change_pct\n";
  for (const auto& row : table.rows) {
    out += row_prefix(row) + "," + fmt(row.result.mean_rmse) + "," + fmt(row.result.var_rmse) + ",";
    const auto it = baseline.find({row.fold.index, static_cast<int>(row.result.architecture)});
    if (it != baseline.end() && it->second > 0.0)
      out += std::to_string(percent_change(it->second, row.result.mean_rmse));
    out += "\n";
  }
  return out;
}

}  // namespace rnnfc
