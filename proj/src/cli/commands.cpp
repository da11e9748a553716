#include "rnnfc/cli/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rnnfc/data/synthetic.hpp"
#include "rnnfc/errors.hpp"
#include "rnnfc/evaluation/profile.hpp"

namespace rnnfc {
namespace fs = std::filesystem;

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  RunConfig c;
  try {
    const auto j = nlohmann::json::parse(in);
    if (!j.is_object()) throw UsageError("config '" + path + "' must be a JSON object");
    for (const auto& [key, v] : j.items()) {
      if (key == "confirmed") c.confirmed_csv = v.get<std::string>();
      else if (key == "deceased") c.deceased_csv = v.get<std::string>();
      else if (key == "recovered") c.recovered_csv = v.get<std::string>();
      else if (key == "start") c.start = v.get<std::string>();
      else if (key == "end") c.end = v.get<std::string>();
      else if (key == "architectures") c.architectures = v.get<std::vector<std::string>>();
      else if (key == "regularisers") c.regularizers = v.get<std::vector<std::string>>();
      else if (key == "epochs") c.train.epochs = v.get<int>();
      else if (key == "learning_rate") c.train.learning_rate = v.get<double>();
      else if (key == "ensemble_size") c.train.ensemble_size = v.get<int>();
      else if (key == "seed") c.train.base_seed = v.get<std::uint64_t>();
      else if (key == "batch_size") c.train.batch_size = v.get<int>();
      else if (key == "hidden_size") c.hidden_size = v.get<int>();
      else if (key == "horizon") c.horizon = v.get<int>();
      else if (key == "jobs") c.jobs = v.get<int>();
      else if (key == "fold") c.fold = v.get<int>();
      else if (key == "synthetic") c.synthetic = v.get<int>();
      else if (key == "synthetic_days") c.synthetic_days = v.get<int>();
      else if (key == "out") c.out_dir = v.get<std::string>();
      else throw UsageError("config '" + path + "': unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  return c;
}

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw DataError("short write to '" + path.string() + "'");
  }
  fs::rename(tmp, path);
}

fs::path dataset_path(const RunConfig& c) { return fs::path(c.out_dir) / "dataset.json"; }

Dataset load_cached_dataset(const RunConfig& c) {
  const auto path = dataset_path(c);
  if (!fs::exists(path))
    throw UsageError("no cached dataset at '" + path.string() + "' (run ingest first)");
  return read_dataset(path.string());
}

std::vector<Candidate> candidates_of(const RunConfig& c) {
  require(!c.architectures.empty(), "at least one architecture is required");
  require(!c.regularizers.empty(), "at least one regulariser is required");
  std::vector<Candidate> out;
  for (const auto& a : c.architectures)
    for (const auto& r : c.regularizers) out.push_back({parse_architecture(a), find_regularizer(r)});
  return out;
}

CvOptions cv_options(const RunConfig& c) {
  CvOptions o;
  o.model.hidden_size = c.hidden_size;
  o.model.horizon = c.horizon;
  o.model.input_features = kFeatureCount;
  o.jobs = c.jobs;
  o.cell_dir = (fs::path(c.out_dir) / "cells").string();
  return o;
}

Fold chosen_fold(const RunConfig& c, const Dataset& ds) {
  const auto folds = make_folds(ds.day_count, c.horizon, ds.epoch_date);
  require(c.fold >= 0, "--fold K is required");
  require(c.fold < static_cast<int>(folds.size()),
          "fold " + std::to_string(c.fold) + " out of range (dataset has " +
              std::to_string(folds.size()) + " folds)");
  return folds[c.fold];
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string slug(std::string_view text) { return label_slug(text); }

Date cli_date(const std::string& text, const char* flag) {
  try {
    return parse_iso(text);
  } catch (const DataError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

int cmd_ingest(const RunConfig& c, std::ostream& out) {
  Dataset ds;
  if (c.synthetic > 0) {
    ds = synthesize_dataset(c.synthetic, c.synthetic_days, c.train.base_seed);
  } else {
    require(!c.confirmed_csv.empty() && !c.deceased_csv.empty() && !c.recovered_csv.empty(),
            "ingest needs the confirmed, deceased and recovered CSV paths (or --synthetic N)");
    const Date start = cli_date(c.start, "--start");
    const Date end = cli_date(c.end, "--end");
    const auto confirmed = parse_jhu_csv(read_text_file(c.confirmed_csv), c.confirmed_csv);
    const auto deceased = parse_jhu_csv(read_text_file(c.deceased_csv), c.deceased_csv);
    const auto recovered = parse_jhu_csv(read_text_file(c.recovered_csv), c.recovered_csv);
    ds = assemble_dataset(confirmed, deceased, recovered, start, end);
  }
  fs::create_directories(c.out_dir);
  write_dataset(ds, dataset_path(c).string());
  out << ds.size() << " locations, " << ds.day_count << " days, " << to_iso(ds.epoch_date)
      << " to " << to_iso(add_days(ds.epoch_date, ds.day_count - 1)) << " (last day)\n";
  return kExitOk;
}

int cmd_folds(const RunConfig& c, std::ostream& out) {
  const Dataset ds = load_cached_dataset(c);
  const auto folds = make_folds(ds.day_count, c.horizon, ds.epoch_date);
  out << "fold train_days validation_start test_start test_end\n";
  for (const auto& f : folds) {
    out << std::setw(4) << f.index << ' ' << std::setw(10) << f.train.size() << ' '
        << to_dmy(add_days(ds.epoch_date, f.validation.begin)) << "       " << to_dmy(f.test_start_date)
        << ' ' << to_dmy(add_days(f.test_start_date, f.test.size())) << '\n';
  }
  return kExitOk;
}

int cmd_cv(const RunConfig& c, std::ostream& out) {
  const Dataset ds = load_cached_dataset(c);
  const auto candidates = candidates_of(c);
  c.train.validate();
  const auto opts = cv_options(c);
  make_folds(ds.day_count, c.horizon, ds.epoch_date);
  const auto table = cross_validate(ds, candidates, c.train, opts);
  write_atomic(fs::path(c.out_dir) / "cv_members.csv", members_csv(table));
  write_atomic(fs::path(c.out_dir) / "cv_summary.csv", summary_csv(table));
  out << table.rows.size() << " cells written to " << (fs::path(c.out_dir) / "cv_summary.csv").string()
      << '\n';
  return kExitOk;
}

int cmd_select(const RunConfig& c, std::ostream& out) {
  const Dataset ds = load_cached_dataset(c);
  auto opts = cv_options(c);
  opts.require_cached = true;
  if (c.fold >= 0) opts.folds = {c.fold};
  const auto table = cross_validate(ds, candidates_of(c), c.train, opts);
  std::vector<EnsembleResult> results;
  if (c.fold >= 0) {
    for (const auto& row : table.rows) results.push_back(row.result);
  } else {
    results = aggregate_over_folds(table);
  }
  for (const auto& r : results) {
    out << std::left << std::setw(16)
        << (std::string(to_string(r.architecture)) + "+" + r.regularizer) << std::right
        << " mean_rmse=" << fmt(r.mean_rmse) << " var_rmse=" << fmt(r.var_rmse) << '\n';
  }
  const auto& best = select_best(results);
  out << "best: " << to_string(best.architecture) << "+" << best.regularizer
      << " mean_rmse=" << fmt(best.mean_rmse) << " var_rmse=" << fmt(best.var_rmse)
      << (c.fold >= 0 ? " (fold " + std::to_string(c.fold) + ")" : std::string(" (all folds)"))
      << '\n';
  return kExitOk;
}

struct SingleCell {
  Dataset ds;
  Fold fold;
  Candidate candidate;
  EnsembleResult result;
};

SingleCell single_cell(const RunConfig& c) {
  SingleCell s;
  s.ds = load_cached_dataset(c);
  s.fold = chosen_fold(c, s.ds);
  const auto candidates = candidates_of(c);
  require(candidates.size() == 1, "choose exactly one --arch and one --reg for this command");
  s.candidate = candidates.front();
  c.train.validate();
  const auto opts = cv_options(c);
  fs::create_directories(opts.cell_dir);
  s.result = run_cell(s.ds, s.fold, s.candidate, c.train, opts);
  return s;
}

std::string cell_stem(const SingleCell& s) {
  return "fold" + std::to_string(s.fold.index) + "_" + slug(to_string(s.candidate.architecture)) +
         "_" + slug(s.candidate.regularizer.label);
}

int cmd_forecast(const RunConfig& c, std::ostream& out) {
  const auto s = single_cell(c);
  nlohmann::json records = nlohmann::json::array();
  for (std::size_t l = 0; l < s.ds.size(); ++l) {
    const auto& loc = s.ds.locations[l];
    const MatrixXd& pred = s.result.mean_forecast[l];
    nlohmann::json r;
    r["location"] = loc.name;
    std::vector<std::string> dates;
    for (int d = 0; d < s.fold.test.size(); ++d) dates.push_back(to_iso(add_days(s.fold.test_start_date, d)));
    r["dates"] = dates;
    nlohmann::json actuals;
    for (int f = 0; f < kFeatureCount; ++f) {
      const std::string name(kFeatureNames[f]);
      r[name] = std::vector<double>(pred.row(f).begin(), pred.row(f).end());
      const auto actual = loc.values.row(f).segment(s.fold.test.begin, s.fold.test.size());
      actuals[name] = std::vector<double>(actual.begin(), actual.end());
    }
    r["actuals"] = actuals;
    records.push_back(std::move(r));
  }
  const auto path = fs::path(c.out_dir) / "forecast" / (cell_stem(s) + ".json");
  write_atomic(path, records.dump(2) + "\n");
  out << "forecast for " << s.candidate.name() << " fold " << s.fold.index << " (ensemble mean_rmse "
      << fmt(s.result.mean_rmse) << ") written to " << path.string() << '\n';
  return kExitOk;
}

int cmd_profile(const RunConfig& c, std::ostream& out) {
  const Dataset ds = load_cached_dataset(c);
  std::string csv = "location,feature,category,evidence_date\n";
  std::array<int, 4> counts{};
  for (const auto& loc : ds.locations) {
    for (int f = 0; f < kFeatureCount; ++f) {
      const VectorXd row = loc.values.row(f).transpose();
      const auto p = profile_series(std::span<const double>(row.data(), row.size()));
      ++counts[static_cast<int>(p.category)];
      csv += loc.name.find(',') == std::string::npos ? loc.name : "\"" + loc.name + "\"";
      csv += "," + std::string(kFeatureNames[f]) + "," + std::string(to_string(p.category)) + ",";
      if (p.evidence) csv += to_iso(add_days(ds.epoch_date, *p.evidence));
      csv += "\n";
    }
  }
  const auto path = fs::path(c.out_dir) / "profile.csv";
  write_atomic(path, csv);
  out << "smooth " << counts[0] << ", outlier " << counts[1] << ", step " << counts[2] << ", flat "
      << counts[3] << " series; written to " << path.string() << '\n';
  return kExitOk;
}

int cmd_export_plots(const RunConfig& c, std::ostream& out) {
  const auto s = single_cell(c);
  const auto dir = fs::path(c.out_dir) / "plots" / cell_stem(s);
  for (std::size_t l = 0; l < s.ds.size(); ++l) {
    const auto& loc = s.ds.locations[l];
    std::string csv =
        "date,actual_confirmed,actual_deceased,actual_recovered,pred_confirmed,pred_deceased,pred_recovered\n";
    for (int d = 0; d < s.fold.test.end; ++d) {
      csv += to_iso(add_days(s.ds.epoch_date, d));
      for (int f = 0; f < kFeatureCount; ++f) csv += "," + fmt(loc.values(f, d));
      for (int f = 0; f < kFeatureCount; ++f) {
        csv += ",";
        if (d >= s.fold.test.begin) csv += fmt(s.result.mean_forecast[l](f, d - s.fold.test.begin));
      }
      csv += "\n";
    }
    write_atomic(dir / (slug(loc.name) + ".csv"), csv);
  }
  out << s.ds.size() << " plot series written to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Encoder-decoder RNN forecasting with forward-chaining cross-validation", "rnnfc"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs, fold, synthetic, epochs, ensemble, batch, days, hidden;
  std::optional<double> lr;
  std::optional<std::string> out_dir, confirmed, deceased, recovered, start, end;
  std::vector<std::string> archs, regs;

  app.add_option("--config", config_path, "JSON config file (default: $RNNFC_CONFIG)");
  app.add_option("--seed", seed, "Base seed for ensembles and synthetic data");
  app.add_option("--jobs", jobs, "Parallel cross-validation cells")->check(CLI::PositiveNumber);
  app.add_option("--arch", archs, "Architecture: gru or lstm (repeatable)");
  app.add_option("--reg", regs, "Regulariser label (repeatable)");
  app.add_option("--fold", fold, "Fold index");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--synthetic", synthetic, "Generate N synthetic locations instead of reading CSVs");
  app.add_option("--days", days, "Day count of the synthetic dataset");
  app.add_option("--epochs", epochs, "Training epochs");
  app.add_option("--ensemble", ensemble, "Ensemble size");
  app.add_option("--batch", batch, "Mini-batch size (0 = full batch)");
  app.add_option("--lr", lr, "Adam learning rate");
  app.add_option("--hidden", hidden, "Encoder hidden size");
  app.add_option("--confirmed", confirmed, "Confirmed-cases CSV");
  app.add_option("--deceased", deceased, "Deaths CSV");
  app.add_option("--recovered", recovered, "Recoveries CSV");
  app.add_option("--start", start, "Window start, ISO date");
  app.add_option("--end", end, "Window end (exclusive), ISO date");

  auto* ingest = app.add_subcommand("ingest", "Read snapshots (or synthesize) and cache the dataset");
  auto* folds = app.add_subcommand("folds", "List forward-chaining folds");
  auto* cv = app.add_subcommand("cv", "Cross-validate every (fold, candidate) ensemble");
  auto* select = app.add_subcommand("select", "Report the best candidate from completed cells");
  auto* forecast = app.add_subcommand("forecast", "Write ensemble forecasts for one fold and candidate");
  auto* profile = app.add_subcommand("profile", "Classify series as smooth, outlier, step or flat");
  auto* plots = app.add_subcommand("export-plots", "Write prediction-vs-actual series for one fold");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rnnfc: " << e.what() << '\n';
    return kExitUsage;
  }

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    RunConfig c;
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnv); env && *env) config_path = env;
    }
    if (!config_path.empty()) c = load_run_config(config_path);
    if (seed) c.train.base_seed = *seed;
    if (jobs) c.jobs = *jobs;
    if (!archs.empty()) c.architectures = archs;
    if (!regs.empty()) c.regularizers = regs;
    if (fold) c.fold = *fold;
    if (out_dir) c.out_dir = *out_dir;
    if (synthetic) c.synthetic = *synthetic;
    if (days) c.synthetic_days = *days;
    if (epochs) c.train.epochs = *epochs;
    if (ensemble) c.train.ensemble_size = *ensemble;
    if (batch) c.train.batch_size = *batch;
    if (lr) c.train.learning_rate = *lr;
    if (hidden) c.hidden_size = *hidden;
    if (confirmed) c.confirmed_csv = *confirmed;
    if (deceased) c.deceased_csv = *deceased;
    if (recovered) c.recovered_csv = *recovered;
    if (start) c.start = *start;
    if (end) c.end = *end;

    if (ingest->parsed()) return cmd_ingest(c, out);
    if (folds->parsed()) return cmd_folds(c, out);
    if (cv->parsed()) return cmd_cv(c, out);
    if (select->parsed()) return cmd_select(c, out);
    if (forecast->parsed()) return cmd_forecast(c, out);
    if (profile->parsed()) return cmd_profile(c, out);
    if (plots->parsed()) return cmd_export_plots(c, out);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << stage << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << stage << ": " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DataError& e) {
    err << stage << ": " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << stage << ": " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace rnnfc
