#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "rgsl/types.hpp"

namespace rgsl::data {

enum class Split { Train, Val, Test };

struct SplitRatios {
    double train = 0.6;
    double val = 0.2;
    double test = 0.2;
};

/// Half-open timestamp range.
struct TimeRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end - begin; }
};

/// Chronological split on raw timestamps: train = floor(T*r_train),
/// val = floor(T*r_val), test takes the remainder.
std::array<TimeRange, 3> split_ranges(std::size_t timestamps, const SplitRatios& ratios = {});

/// Sliding windows (stride 1) inside one split. Inputs are normalized, targets
/// keep original units and hold the first `out_features` features.
struct WindowSet {
    std::size_t count = 0;
    std::size_t history_len = 0;
    std::size_t horizon = 0;
    std::size_t nodes = 0;
    std::size_t features = 0;
    std::size_t out_features = 0;
    /// Raw timestamp of the first input step of window 0.
    std::size_t first_timestamp = 0;
    std::vector<double> inputs;   // (B, T_in, N, F)
    std::vector<double> targets;  // (B, tau, N, F_out)
    ScalerStats scaler;

    double input(std::size_t b, std::size_t t, std::size_t n, std::size_t f) const {
        return inputs[((b * history_len + t) * nodes + n) * features + f];
    }
    double target(std::size_t b, std::size_t k, std::size_t n, std::size_t f) const {
        return targets[((b * horizon + k) * nodes + n) * out_features + f];
    }
};

WindowSet make_windows(const SeriesTensor& series, const ScalerStats& scaler, std::size_t history_len,
                       std::size_t horizon, TimeRange range, std::size_t out_features = 1);

WindowSet make_windows(const SeriesTensor& series, const ScalerStats& scaler, std::size_t history_len,
                       std::size_t horizon, Split split, const SplitRatios& ratios = {},
                       std::size_t out_features = 1);

/// Model-ready layout of a set of windows: one (B*N x F) matrix per input
/// step and a (B*N x tau*F_out) target matrix, rows ordered b*N + n and
/// target column k*F_out + f.
struct Batch {
    std::size_t size = 0;
    std::vector<Matrix> steps;
    Matrix targets;
};

Batch make_batch(const WindowSet& windows, std::span<const std::size_t> indices);

/// Inverse of the target layout: (B*N x tau*F_out) -> (B, tau, N, F_out).
std::vector<double> unpack_forecast(const Matrix& rows, std::size_t batch, std::size_t horizon,
                                    std::size_t nodes, std::size_t out_features);

}  // namespace rgsl::data
