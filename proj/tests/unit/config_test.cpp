#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "rgsl/config.hpp"
#include "rgsl/error.hpp"
#include "rgsl/random.hpp"

namespace rgsl {
namespace {

constexpr auto code_of = &testing::error_code_of;

TEST(Config, EmptyDocumentYieldsDefaults) {
    const auto cfg = validate_config(parse_config("{}"));
    EXPECT_EQ(cfg.temperature, 0.5);
    EXPECT_EQ(cfg.horizon, 12);
    EXPECT_EQ(cfg.history_len, 12);
    EXPECT_EQ(cfg.hidden_dim, 64);
    EXPECT_EQ(cfg.embed_dim, 10);
    EXPECT_EQ(cfg.learning_rate, 1e-3);
    EXPECT_EQ(cfg.n_recurrent_layers, 2);
    EXPECT_EQ(cfg.batch_size, 64);
    EXPECT_EQ(cfg.early_stop_patience, 15);
    EXPECT_EQ(cfg.grad_clip, 5.0);
    EXPECT_EQ(cfg.eval_repeats, 5);
    EXPECT_EQ(cfg.mape_mask_threshold, 1e-3);
    EXPECT_EQ(cfg, parse_config(serialize_config(cfg)));
}

TEST(Config, ConsistentValuesAcceptedUnchanged) {
    RGSLConfig cfg;
    cfg.temperature = 0.5;
    cfg.horizon = 12;
    cfg.history_len = 12;
    cfg.embed_dim = 10;
    EXPECT_EQ(validate_config(cfg), cfg);
}

TEST(Config, RejectsInvalidFields) {
    EXPECT_EQ(code_of([] { validate_config(parse_config(R"({"temperature": 0.0})")); }),
              ErrorCode::InvalidTemperature);
    EXPECT_EQ(code_of([] { validate_config(parse_config(R"({"temperature": -1})")); }),
              ErrorCode::InvalidTemperature);
    EXPECT_EQ(code_of([] { validate_config(parse_config(R"({"horizon": 0})")); }), ErrorCode::HorizonZero);
    EXPECT_EQ(code_of([] { validate_config(parse_config(R"({"hidden_dim": 0})")); }),
              ErrorCode::NonPositiveDimension);
    EXPECT_EQ(code_of([] { validate_config(parse_config(R"({"history_len": -3})")); }),
              ErrorCode::NonPositiveDimension);
    EXPECT_EQ(code_of([] { parse_config(R"({"tau": 3})"); }), ErrorCode::UnknownConfigKey);
    EXPECT_EQ(code_of([] { parse_config(R"({"horizon": "twelve"})"); }), ErrorCode::BadConfigValue);
    EXPECT_EQ(code_of([] { parse_config("[1, 2]"); }), ErrorCode::BadConfigValue);
    EXPECT_EQ(code_of([] { validate_config(parse_config(R"({"mix_mode": "blend"})")); }),
              ErrorCode::BadConfigValue);
}

// Property: parse(serialize(cfg)) == cfg over randomly drawn valid configs.
TEST(Config, RoundTripProperty) {
    RngStream rng{2024, 99};
    const char* modes[] = {"attention", "explicit_only", "implicit_only", "half_sum", "no_graph"};
    for (int trial = 0; trial < 200; ++trial) {
        RGSLConfig cfg;
        cfg.n_nodes = static_cast<std::int64_t>(rng.below(500));
        if (cfg.n_nodes == 1) cfg.n_nodes = 2;
        cfg.n_features = 1 + static_cast<std::int64_t>(rng.below(4));
        cfg.n_out_features = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cfg.n_features)));
        cfg.embed_dim = 1 + static_cast<std::int64_t>(rng.below(32));
        cfg.hidden_dim = 1 + static_cast<std::int64_t>(rng.below(128));
        cfg.horizon = 1 + static_cast<std::int64_t>(rng.below(24));
        cfg.temperature = rng.uniform_open() * 3.0;
        cfg.learning_rate = rng.uniform_open() * 1e-2;
        cfg.hard_sampling = rng.below(2) == 1;
        cfg.deterministic_eval = rng.below(2) == 1;
        cfg.embed_init_std = rng.uniform_open();
        cfg.mix_mode = modes[rng.below(5)];
        cfg.seed = rng.next_u64();
        cfg.mape_mask_threshold = rng.uniform_open();
        cfg = validate_config(cfg);
        EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);
    }
}

TEST(Config, HashIsStableAndSensitive) {
    RGSLConfig a;
    RGSLConfig b;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = 7;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Errors, ExitCodeCategories) {
    EXPECT_EQ(exit_code_for(ErrorCode::FileNotFound), 2);
    EXPECT_EQ(exit_code_for(ErrorCode::InvalidTemperature), 2);
    EXPECT_EQ(exit_code_for(ErrorCode::DivergedLoss), 3);
    EXPECT_EQ(exit_code_for(ErrorCode::ConfigMismatch), 4);
    EXPECT_EQ(Error(ErrorCode::FileNotFound, "x").name(), "FileNotFound");
}

}  // namespace
}  // namespace rgsl
