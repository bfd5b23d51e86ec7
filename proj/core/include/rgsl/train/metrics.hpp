#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace rgsl::train {

struct HorizonMetrics {
    double mae = 0.0;
    double rmse = 0.0;
    double mape = 0.0;  ///< percent; NaN when every target at this horizon is masked
};

struct MetricsReport {
    double mae = 0.0;
    double rmse = 0.0;
    double mape = 0.0;  ///< percent
    std::vector<HorizonMetrics> per_horizon;
    std::size_t eval_repeats = 1;
    double mae_std = 0.0;
    double rmse_std = 0.0;
    double mape_std = 0.0;
};

/// mean |pred - target|.
double mae_loss(std::span<const double> pred, std::span<const double> target);

/// Metrics over arrays laid out as (B, horizon, inner). MAPE is averaged over
/// entries with |target| >= mask_threshold; throws AllMasked if there are none.
MetricsReport compute_metrics(std::span<const double> pred, std::span<const double> target,
                              std::size_t horizon, std::size_t inner, double mask_threshold);

/// Mean and population std across repeats; per-horizon curves are averaged.
MetricsReport aggregate_repeats(const std::vector<MetricsReport>& repeats);

void write_metrics_json(const std::filesystem::path& path, const MetricsReport& report);
MetricsReport read_metrics_json(const std::filesystem::path& path);

}  // namespace rgsl::train
