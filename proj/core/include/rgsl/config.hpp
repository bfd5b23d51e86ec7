#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace rgsl {

/// How the explicit and learned branch outputs are combined inside every gate.
enum class MixMode {
    Attention,     ///< per-node two-way softmax gate (the full model)
    ExplicitOnly,  ///< learned branch never evaluated
    ImplicitOnly,  ///< explicit branch never evaluated
    HalfSum,       ///< fixed (0.5, 0.5) weights
    NoGraph,       ///< plain graph-free GRU baseline: identity propagator, one branch
};

std::string_view to_string(MixMode mode) noexcept;
MixMode mix_mode_from_string(std::string_view name);

/// Training and model hyperparameters. Field names double as config-file keys.
struct RGSLConfig {
    std::int64_t n_nodes = 0;  ///< 0 = take from the prepared dataset
    std::int64_t n_features = 1;
    std::int64_t n_out_features = 1;
    std::int64_t embed_dim = 10;
    std::int64_t hidden_dim = 64;
    std::int64_t n_recurrent_layers = 2;
    std::int64_t history_len = 12;
    std::int64_t horizon = 12;
    double temperature = 0.5;
    bool hard_sampling = false;
    bool deterministic_eval = false;
    bool symmetrize_sample = false;
    double learning_rate = 1e-3;
    double grad_clip = 5.0;
    std::int64_t batch_size = 64;
    std::int64_t max_epochs = 100;
    std::int64_t max_steps = 0;  ///< 0 = unlimited
    std::int64_t early_stop_patience = 15;
    std::int64_t eval_repeats = 5;
    std::int64_t train_eval_repeats = 1;
    double embed_init_std = 0.3;
    std::string mix_mode = "attention";
    std::uint64_t seed = 42;
    double mape_mask_threshold = 1e-3;

    bool operator==(const RGSLConfig&) const = default;
};

/// Checks every field and returns the normalized config. Throws rgsl::Error.
RGSLConfig validate_config(RGSLConfig cfg);

/// Parses a flat JSON object; missing keys take defaults, unknown keys are rejected.
RGSLConfig parse_config(std::string_view text);
std::string serialize_config(const RGSLConfig& cfg);

RGSLConfig load_config_file(const std::filesystem::path& path);

/// Stable 64-bit FNV-1a digest of the serialized config, rendered as hex.
std::string config_hash(const RGSLConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL) noexcept;

}  // namespace rgsl
