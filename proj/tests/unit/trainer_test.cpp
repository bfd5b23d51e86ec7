#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "expect_error.hpp"
#include "rgsl/data/scaler.hpp"
#include "rgsl/train/adam.hpp"
#include "rgsl/train/trainer.hpp"
#include "tiny_model.hpp"

namespace rgsl::train {
namespace {

using rgsl::testing::error_code_of;

struct Sets {
    data::WindowSet train, val;
    ScalerStats scaler;
};

Sets tiny_sets(const RGSLConfig& cfg) {
    const auto series = rgsl::testing::wave_series(60, 4, 3);
    const auto ranges = data::split_ranges(series.timestamps());
    Sets s;
    s.scaler = data::fit_scaler(series, ranges[0].begin, ranges[0].end);
    const auto t_in = static_cast<std::size_t>(cfg.history_len), tau = static_cast<std::size_t>(cfg.horizon);
    s.train = data::make_windows(series, s.scaler, t_in, tau, data::Split::Train);
    s.val = data::make_windows(series, s.scaler, t_in, tau, data::Split::Val);
    return s;
}

std::vector<Matrix> snapshot(strgc::RGSLModel& m) {
    std::vector<Matrix> out;
    for (auto* p : m.parameters()) out.push_back(p->value);
    return out;
}

TEST(Adam, ClipsGlobalNormAndSkipsAtZeroRate) {
    ad::Parameter p("p", Matrix::Zero(1, 2));
    p.grad = (Matrix(1, 2) << 30.0, 40.0).finished();
    Adam frozen({&p}, 0.0, 5.0);
    EXPECT_DOUBLE_EQ(frozen.step(), 50.0);
    EXPECT_TRUE(p.value.isZero());
    Adam opt({&p}, 0.1, 5.0);
    opt.step();
    // First Adam step moves each coordinate by lr in the gradient's sign direction.
    EXPECT_NEAR(p.value(0, 0), -0.1, 1e-9);
    EXPECT_NEAR(p.value(0, 1), -0.1, 1e-9);
}

TEST(Fit, ZeroLearningRateLeavesParameters) {
    auto cfg = rgsl::testing::tiny_config();
    cfg.learning_rate = 0.0;
    cfg.max_epochs = 1;
    const auto sets = tiny_sets(cfg);
    strgc::RGSLModel model(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    const auto before = snapshot(model);
    fit(model, sets.train, sets.val);
    EXPECT_EQ(snapshot(model), before);
}

TEST(Fit, PatienceOneStopsAfterTwoEpochs) {
    auto cfg = rgsl::testing::tiny_config();
    cfg.learning_rate = 0.0;  // validation never improves after the first epoch
    cfg.early_stop_patience = 1;
    cfg.max_epochs = 10;
    const auto sets = tiny_sets(cfg);
    strgc::RGSLModel model(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    const auto result = fit(model, sets.train, sets.val);
    EXPECT_TRUE(result.early_stopped);
    EXPECT_EQ(result.history.size(), 2u);
    EXPECT_EQ(result.best.epoch, 1);
}

TEST(Fit, DeterministicUnderSeed) {
    auto cfg = rgsl::testing::tiny_config();
    cfg.max_epochs = 2;
    const auto sets = tiny_sets(cfg);
    strgc::RGSLModel a(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    strgc::RGSLModel b(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    const auto ra = fit(a, sets.train, sets.val);
    const auto rb = fit(b, sets.train, sets.val);
    ASSERT_EQ(ra.history.size(), rb.history.size());
    for (std::size_t i = 0; i < ra.history.size(); ++i) {
        EXPECT_EQ(ra.history[i].train_loss, rb.history[i].train_loss);
        EXPECT_EQ(ra.history[i].val_mae, rb.history[i].val_mae);
    }
    EXPECT_EQ(snapshot(a), snapshot(b));
}

TEST(Fit, ReducesValidationError) {
    auto cfg = rgsl::testing::tiny_config();
    cfg.max_epochs = 30;
    cfg.learning_rate = 1e-2;
    const auto sets = tiny_sets(cfg);
    strgc::RGSLModel model(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    const auto result = fit(model, sets.train, sets.val);
    EXPECT_LT(result.best.best_val_mae, result.initial_val_mae);
    // The model is left holding the best parameters.
    EXPECT_DOUBLE_EQ(evaluate(model, sets.val, 1, 0).report.mae, result.best.best_val_mae);
}

TEST(Fit, MaxStepsLimit) {
    auto cfg = rgsl::testing::tiny_config();
    cfg.max_steps = 3;
    const auto sets = tiny_sets(cfg);
    strgc::RGSLModel model(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    const auto result = fit(model, sets.train, sets.val);
    EXPECT_EQ(result.steps, 3);
    EXPECT_EQ(result.history.size(), 1u);
}

TEST(Fit, DivergedLoss) {
    auto cfg = rgsl::testing::tiny_config();
    const auto sets = tiny_sets(cfg);
    auto broken = sets.train;
    broken.targets[0] = std::numeric_limits<double>::infinity();
    strgc::RGSLModel model(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    EXPECT_EQ(error_code_of([&] { fit(model, broken, sets.val); }), ErrorCode::DivergedLoss);
}

TEST(Step, SmallStepDecreasesBatchLoss) {
    auto cfg = rgsl::testing::tiny_config();
    cfg.learning_rate = 1e-4;
    strgc::RGSLModel model(cfg, rgsl::testing::tiny_graph(), {{1.0}, {2.0}});
    RngStream rng{13, 1};
    const auto batch = rgsl::testing::random_batch(cfg, 2, rng, 20.0);
    const Matrix noise = rgg::draw_gumbel_difference(4, rng);
    const strgc::ForwardOptions opts{rgg::SampleMode::Soft, &noise, nullptr, std::nullopt};
    Adam opt(model.parameters(), cfg.learning_rate, cfg.grad_clip);
    opt.zero_grad();
    const auto loss = batch_loss(model, batch, opts);
    const double before = loss.value()(0, 0);
    ad::backward(loss);
    opt.step();
    EXPECT_LT(batch_loss(model, batch, opts).value()(0, 0), before);
}

TEST(Evaluate, DeterministicModeHasZeroSpread) {
    auto cfg = rgsl::testing::tiny_config();
    cfg.deterministic_eval = true;
    const auto sets = tiny_sets(cfg);
    strgc::RGSLModel model(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    const auto r = evaluate(model, sets.val, 3).report;
    EXPECT_EQ(r.eval_repeats, 3u);
    EXPECT_EQ(r.mae_std, 0.0);
    EXPECT_EQ(r.per_horizon.size(), 2u);
}

TEST(Evaluate, SamplingSpreadAndReproducibility) {
    const auto cfg = rgsl::testing::tiny_config();
    const auto sets = tiny_sets(cfg);
    strgc::RGSLModel model(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    const auto a = evaluate(model, sets.val, 5).report;
    const auto b = evaluate(model, sets.val, 5).report;
    EXPECT_GT(a.mae_std, 0.0);
    EXPECT_EQ(a.mae, b.mae);
    EXPECT_EQ(a.mae_std, b.mae_std);
}

TEST(Evaluate, IncompatibleSet) {
    auto cfg = rgsl::testing::tiny_config();
    const auto sets = tiny_sets(cfg);
    cfg.horizon = 3;
    strgc::RGSLModel model(cfg, rgsl::testing::tiny_graph(), sets.scaler);
    EXPECT_EQ(error_code_of([&] { evaluate(model, sets.val, 1); }), ErrorCode::ConfigMismatch);
}

TEST(History, CsvHeaderAndRows) {
    const auto path = std::filesystem::temp_directory_path() / "rgsl_history.csv";
    write_history_csv(path, {{1, 2.5, 3.0, 4.0, 5.0, 0.5, 0.25}});
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "epoch,train_loss,val_mae,val_rmse,val_mape,graph_density,mean_alpha0\n"
                        "1,2.5,3,4,5,0.5,0.25\n");
    std::filesystem::remove(path);
}

}  // namespace
}  // namespace rgsl::train
