#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "expect_error.hpp"
#include "rgsl/random.hpp"
#include "rgsl/train/metrics.hpp"

namespace rgsl::train {
namespace {

using rgsl::testing::error_code_of;

TEST(MaeLoss, Cases) {
    const std::vector<double> t{0.0, 4.0};
    EXPECT_EQ(mae_loss(t, t), 0.0);
    EXPECT_EQ(mae_loss(std::vector<double>{1.0, 5.0}, t), 1.0);
    EXPECT_EQ(mae_loss(std::vector<double>{1.0, 2.0}, t), 1.5);
    EXPECT_EQ(error_code_of([&] { mae_loss(std::vector<double>{1.0}, t); }), ErrorCode::ShapeMismatch);
}

TEST(Metrics, HandComputed) {
    const auto r = compute_metrics(std::vector<double>{2.0, 2.0}, std::vector<double>{1.0, 4.0}, 1, 2, 1e-3);
    EXPECT_EQ(r.mae, 1.5);
    EXPECT_EQ(r.rmse, std::sqrt(2.5));
    EXPECT_EQ(r.mape, 75.0);
    ASSERT_EQ(r.per_horizon.size(), 1u);
    EXPECT_EQ(r.per_horizon[0].mae, 1.5);
}

TEST(Metrics, PerfectPrediction) {
    const std::vector<double> v{3.0, 1.0, 2.0, 7.0};
    const auto r = compute_metrics(v, v, 2, 1, 1e-3);
    EXPECT_EQ(r.mae, 0.0);
    EXPECT_EQ(r.rmse, 0.0);
    EXPECT_EQ(r.mape, 0.0);
}

TEST(Metrics, ZeroTargetExcludedFromMapeOnly) {
    const auto r = compute_metrics(std::vector<double>{1.0, 3.0}, std::vector<double>{0.0, 2.0}, 1, 2, 1e-3);
    EXPECT_EQ(r.mae, 1.0);
    EXPECT_EQ(r.rmse, 1.0);
    EXPECT_EQ(r.mape, 50.0);
}

TEST(Metrics, AllMasked) {
    EXPECT_EQ(error_code_of([] {
                  compute_metrics(std::vector<double>{1.0}, std::vector<double>{0.0}, 1, 1, 1e-3);
              }),
              ErrorCode::AllMasked);
}

TEST(Metrics, PerHorizonBreakdown) {
    // B=2, horizon=2, inner=1; horizon 0 errors {1, 3}, horizon 1 errors {0, 2}
    const std::vector<double> pred{2, 4, 4, 6};
    const std::vector<double> target{1, 4, 1, 4};
    const auto r = compute_metrics(pred, target, 2, 1, 1e-3);
    EXPECT_EQ(r.per_horizon[0].mae, 2.0);
    EXPECT_EQ(r.per_horizon[1].mae, 1.0);
    EXPECT_EQ(r.per_horizon[0].rmse, std::sqrt(5.0));
    EXPECT_EQ(r.per_horizon[1].mape, 25.0);
    EXPECT_EQ(r.mae, 1.5);
}

TEST(Metrics, MaeNeverExceedsRmse) {
    RngStream rng{12, 1};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> p(24), t(24);
        for (std::size_t i = 0; i < 24; ++i) {
            p[i] = rng.normal() * 10;
            t[i] = rng.normal() * 10;
        }
        const auto r = compute_metrics(p, t, 3, 4, 1e-3);
        EXPECT_LE(r.mae, r.rmse + 1e-12);
    }
}

TEST(Metrics, AggregateRepeats) {
    MetricsReport a, b;
    a.mae = 1.0;
    b.mae = 3.0;
    a.rmse = b.rmse = 4.0;
    a.per_horizon = {{1.0, 4.0, 10.0}};
    b.per_horizon = {{3.0, 4.0, 20.0}};
    const auto r = aggregate_repeats({a, b});
    EXPECT_EQ(r.eval_repeats, 2u);
    EXPECT_EQ(r.mae, 2.0);
    EXPECT_EQ(r.mae_std, 1.0);
    EXPECT_EQ(r.rmse_std, 0.0);
    EXPECT_EQ(r.per_horizon[0].mape, 15.0);
}

TEST(Metrics, JsonRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "rgsl_metrics.json";
    MetricsReport r;
    r.mae = 1.25;
    r.rmse = 2.5;
    r.mape = 12.0;
    r.eval_repeats = 5;
    r.mae_std = 0.1;
    r.per_horizon = {{1.0, 2.0, std::nan("")}, {1.5, 3.0, 11.0}};
    write_metrics_json(path, r);
    const auto back = read_metrics_json(path);
    EXPECT_EQ(back.mae, r.mae);
    EXPECT_EQ(back.eval_repeats, 5u);
    EXPECT_EQ(back.mae_std, 0.1);
    ASSERT_EQ(back.per_horizon.size(), 2u);
    EXPECT_TRUE(std::isnan(back.per_horizon[0].mape));
    EXPECT_EQ(back.per_horizon[1].mape, 11.0);
    std::filesystem::remove(path);
}

}  // namespace
}  // namespace rgsl::train
