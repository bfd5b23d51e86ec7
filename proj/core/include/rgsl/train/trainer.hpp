#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "rgsl/data/windows.hpp"
#include "rgsl/strgc/model.hpp"
#include "rgsl/train/checkpoint.hpp"
#include "rgsl/train/metrics.hpp"

namespace rgsl::train {

struct HistoryRow {
    std::int64_t epoch = 0;
    double train_loss = 0.0;
    double val_mae = 0.0;
    double val_rmse = 0.0;
    double val_mape = 0.0;
    double graph_density = 0.0;
    double mean_alpha0 = 0.0;
};

struct FitOptions {
    std::function<void(const HistoryRow&)> on_epoch;
};

struct FitResult {
    Checkpoint best;
    std::vector<HistoryRow> history;
    std::int64_t steps = 0;
    bool early_stopped = false;
    double initial_val_mae = 0.0;
};

/// Mean |pred - target| of one forward pass, in data units.
ad::Var batch_loss(strgc::RGSLModel& model, const data::Batch& batch, const strgc::ForwardOptions& options);

/// Adam on the MAE objective with per-epoch validation and early stopping.
/// Leaves the model holding the best-validation parameters.
FitResult fit(strgc::RGSLModel& model, const data::WindowSet& train_set, const data::WindowSet& val_set,
              const FitOptions& options = {});

struct EvalOutcome {
    MetricsReport report;
    double mean_alpha0 = 0.0;
};

/// `repeats` full passes over the set with fresh graph samples each time,
/// keyed by (seed, stream_tag, repeat, batch). Throws ConfigMismatch when the
/// set does not fit the model.
EvalOutcome evaluate(strgc::RGSLModel& model, const data::WindowSet& set, std::size_t repeats,
                     std::uint64_t stream_tag = 1);

/// Forecasts for one batch in data units, (B*N x tau*F_out).
Matrix predict(strgc::RGSLModel& model, const data::Batch& batch, std::uint64_t stream_tag = 2);

void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryRow>& history);

}  // namespace rgsl::train
