#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rgsl/config.hpp"
#include "rgsl/strgc/model.hpp"
#include "rgsl/train/adam.hpp"
#include "rgsl/types.hpp"

namespace rgsl::train {

struct NamedArray {
    std::string name;
    Matrix value;
};

/// Everything needed to rebuild a model and resume optimization.
struct Checkpoint {
    static constexpr std::uint32_t kFormatVersion = 1;

    std::uint32_t format_version = kFormatVersion;
    RGSLConfig config;
    std::int64_t epoch = 0;
    double best_val_mae = 0.0;
    ScalerStats scaler;
    ExplicitGraph explicit_graph;
    std::vector<NamedArray> parameters;
    Adam::State optimizer;
};

Checkpoint capture_checkpoint(strgc::RGSLModel& model, const Adam* optimizer, std::int64_t epoch,
                              double best_val_mae);

/// Builds a model from the checkpoint's config and copies the parameters in.
strgc::RGSLModel restore_model(const Checkpoint& checkpoint);
void load_parameters(strgc::RGSLModel& model, const std::vector<NamedArray>& parameters);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
/// Throws UnsupportedVersion for an unknown format_version.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rgsl::train
