#include <catch_amalgamated.hpp>

#include <filesystem>
#include <set>

#include "rnnfc/data/folds.hpp"
#include "rnnfc/data/synthetic.hpp"
#include "rnnfc/numerics/gradient_check.hpp"
#include "rnnfc/numerics/loss.hpp"
#include "rnnfc/training/persist.hpp"
#include "rnnfc/training/regularizer.hpp"
#include "rnnfc/training/train.hpp"
#include "support.hpp"

using namespace rnnfc;
using namespace rnnfc::test;

namespace {

ModelConfig small_model(Architecture a = Architecture::Gru) {
  ModelConfig c;
  c.architecture = a;
  c.hidden_size = 4;
  return c;
}

TrainConfig quick(int epochs, int ensemble = 1) {
  TrainConfig t;
  t.epochs = epochs;
  t.ensemble_size = ensemble;
  t.base_seed = 3;
  return t;
}

void require_identical(const TrainedModel& a, const TrainedModel& b) {
  CHECK(a.seed == b.seed);
  CHECK(a.params.to_flat() == b.params.to_flat());
  CHECK(a.loss_history == b.loss_history);
}

}  // namespace

TEST_CASE("canonical regulariser grid", "[regularizer]") {
  const auto& regs = canonical_regularizers();
  REQUIRE(regs.size() == 6);
  CHECK(regs[0] == RegularizerConfig{"No reg", 0, 0, 0});
  CHECK(regs[1] == RegularizerConfig{"L1", 0.01, 0, 0});
  CHECK(regs[2] == RegularizerConfig{"L2", 0, 0.01, 0});
  CHECK(regs[3] == RegularizerConfig{"Dropout", 0, 0, 0.2});
  CHECK(regs[4] == RegularizerConfig{"L1L2", 0.01, 0.01, 0});
  CHECK(regs[5] == RegularizerConfig{"All reg", 0.01, 0.01, 0.2});
  CHECK(find_regularizer("all_reg").label == "All reg");
  CHECK(find_regularizer("NO-REG").label == "No reg");
  CHECK(find_regularizer("dropout").dropout_rate == 0.2);
  CHECK(canonical_index("L1L2") == 4);
  CHECK(label_slug("All reg") == "all_reg");
  CHECK_THROWS_AS(find_regularizer("L3"), UsageError);
}

TEST_CASE("total_loss composition", "[training][loss]") {
  Rng rng(1);
  ModelParams p = ModelParams::initialize(ModelConfig{}, rng);
  std::mt19937_64 data(2);
  MatrixXd pred = random_matrix(3, 28, data), target = random_matrix(3, 28, data);

  SECTION("No reg equals MSE bit-exactly") {
    auto t = total_loss(pred, target, p, find_regularizer("No reg"));
    CHECK(t.value == mse_loss(pred, target).value);
    CHECK(t.penalty == 0.0);
    CHECK(t.grad_params.to_flat().isZero());
  }
  SECTION("zero weights make penalties vanish") {
    ModelParams z = ModelParams::zeros(ModelConfig{});
    CHECK(total_loss(pred, target, z, find_regularizer("L1L2")).value == mse_loss(pred, target).value);
  }
  SECTION("example matrix gives 0.06 + 0.14") {
    ModelConfig c;
    c.hidden_size = 2;
    c.input_features = 2;
    ModelParams q = ModelParams::zeros(c);
    std::get<GruCellParams<double>>(q.encoder).W_z << 1, -2, 0, 3;
    auto t = total_loss(pred, pred, q, find_regularizer("L1L2"));
    CHECK(std::abs(t.value - 0.20) <= 1e-12);
    CHECK(t.mse == 0.0);
  }
  SECTION("monotone in both lambdas") {
    double prev = -1.0;
    for (double l1 : {0.0, 0.001, 0.01, 0.1}) {
      for (double l2 : {0.0, 0.01, 0.1}) {
        const double v = total_loss(pred, target, p, {"x", l1, l2, 0.0}).value;
        CHECK(v >= total_loss(pred, target, p, {"x", l1, 0.0, 0.0}).value);
        CHECK(v >= total_loss(pred, target, p, {"x", 0.0, l2, 0.0}).value);
      }
      const double v = total_loss(pred, target, p, {"x", l1, 0.0, 0.0}).value;
      CHECK(v >= prev);
      prev = v;
    }
  }
  SECTION("non-finite loss is a numeric error") {
    MatrixXd bad = pred;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(total_loss(bad, target, p, find_regularizer("No reg")), NumericError);
  }
}

TEST_CASE("regularised loss gradient matches finite differences", "[training][gradcheck]") {
  for (auto a : {Architecture::Gru, Architecture::Lstm}) {
    for (const auto& reg : canonical_regularizers()) {
      ModelConfig c;
      c.architecture = a;
      c.hidden_size = 3;
      c.horizon = 3;
      c = apply_regularizer(c, reg);
      std::mt19937_64 data(31);
      ModelParams p = ModelParams::zeros(c);
      randomize(p, data);
      MatrixXd series = random_matrix(3, 5, data), target = random_matrix(3, 3, data);
      auto f = [&](const VectorXd& theta) {
        ModelParams q = p;
        q.assign_flat(theta);
        Rng rng(8);
        return total_loss(forward(series, 0.3, q, c, rng, true).forecast, target, q, reg).value;
      };
      Rng rng(8);
      auto fwd = forward(series, 0.3, p, c, rng, true);
      auto t = total_loss(fwd.forecast, target, p, reg);
      VectorXd analytic = backward(t.grad_pred, fwd.cache, p).to_flat() + t.grad_params.to_flat();
      INFO(to_string(a) << " " << reg.label);
      CHECK(gradient_check(f, p.to_flat(), analytic).max_relative_error < 1e-4);
    }
  }
}

TEST_CASE("training set uses train-window statistics", "[training]") {
  Dataset ds = synthesize_dataset(3, 112, 4);
  Fold fold = make_folds(ds.day_count, 28, ds.epoch_date)[0];
  TrainingSet set = make_training_set(ds, fold);
  REQUIRE(set.inputs.size() == 3);
  for (const auto& in : set.inputs) {
    CHECK(in.cols() == 28);
    for (Eigen::Index f = 0; f < 3; ++f) CHECK(std::abs(in.row(f).mean()) < 1e-9);
  }
  CHECK(set.targets[0].cols() == 28);
  CHECK(set.ids[1] == ds.locations[1].id_scalar);
}

TEST_CASE("train_model descends and is deterministic", "[training]") {
  Dataset ds = synthesize_dataset(5, 112, 7);
  Fold fold = make_folds(ds.day_count, 28, ds.epoch_date)[0];
  const auto& noreg = find_regularizer("No reg");

  TrainedModel a = train_model(ds, fold, small_model(), noreg, quick(50), 5);
  TrainedModel b = train_model(ds, fold, small_model(), noreg, quick(50), 5);
  REQUIRE(a.loss_history.size() == 50);
  CHECK(a.loss_history.back() < a.loss_history.front());
  require_identical(a, b);

  TrainedModel one = train_model(ds, fold, small_model(), noreg, quick(1), 5);
  CHECK(a.loss_history.back() < one.loss_history.back());

  TrainConfig mini = quick(20);
  mini.batch_size = 2;
  TrainedModel m1 = train_model(ds, fold, small_model(), find_regularizer("All reg"), mini, 9);
  TrainedModel m2 = train_model(ds, fold, small_model(), find_regularizer("All reg"), mini, 9);
  require_identical(m1, m2);

  CHECK_THROWS_AS(train_model(ds, fold, small_model(), noreg, quick(0), 5), UsageError);
  Fold bad = fold;
  bad.validation = {28, 28};
  CHECK_THROWS_AS(train_model(ds, bad, small_model(), noreg, quick(1), 5), UsageError);
}

TEST_CASE("ensembles are seeded per member", "[training][ensemble]") {
  Dataset ds = synthesize_dataset(3, 84, 2);
  Fold fold = make_folds(ds.day_count, 28, ds.epoch_date)[0];
  const auto& reg = find_regularizer("Dropout");

  auto members = train_ensemble(ds, fold, small_model(Architecture::Lstm), reg, quick(5, 4));
  REQUIRE(members.size() == 4);
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < members.size(); ++i) {
    CHECK(members[i].seed == 3 + i);
    seeds.insert(members[i].seed);
  }
  CHECK(seeds.size() == 4);
  CHECK(members[0].params.to_flat() != members[1].params.to_flat());

  auto parallel = train_ensemble(ds, fold, small_model(Architecture::Lstm), reg, quick(5, 4), 3);
  for (std::size_t i = 0; i < members.size(); ++i) require_identical(members[i], parallel[i]);

  auto solo = train_ensemble(ds, fold, small_model(Architecture::Lstm), reg, quick(5, 1));
  REQUIRE(solo.size() == 1);
  require_identical(solo[0], train_model(ds, fold, small_model(Architecture::Lstm), reg, quick(5), 3));
}

TEST_CASE("trained models persist with a metadata sidecar", "[training][io]") {
  Dataset ds = synthesize_dataset(2, 84, 1);
  Fold fold = make_folds(ds.day_count, 28, ds.epoch_date)[0];
  TrainedModel m = train_model(ds, fold, small_model(), find_regularizer("L2"), quick(3), 11);
  const auto stem = (std::filesystem::temp_directory_path() / "rnnfc_test_model").string();
  save_trained_model(m, stem);
  TrainedModel back = load_trained_model(stem);
  require_identical(m, back);
  CHECK(back.regularizer == m.regularizer);
  CHECK(back.fold_index == 0);
  CHECK(back.train_config.epochs == 3);
  CHECK(back.model_config.hidden_size == 4);
  std::filesystem::remove(stem + ".bin");
  std::filesystem::remove(stem + ".json");
  CHECK_THROWS_AS(load_trained_model(stem), DataError);
}
