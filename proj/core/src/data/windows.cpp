#include "rgsl/data/windows.hpp"

#include <cmath>
#include <string>

#include "rgsl/error.hpp"

namespace rgsl::data {

std::array<TimeRange, 3> split_ranges(std::size_t timestamps, const SplitRatios& ratios) {
    const double t = static_cast<double>(timestamps);
    const auto train_len = static_cast<std::size_t>(std::floor(t * ratios.train));
    const auto val_len = static_cast<std::size_t>(std::floor(t * ratios.val));
    const std::size_t val_end = std::min(timestamps, train_len + val_len);
    return {TimeRange{0, train_len}, TimeRange{train_len, val_end}, TimeRange{val_end, timestamps}};
}

WindowSet make_windows(const SeriesTensor& series, const ScalerStats& scaler, std::size_t history_len,
                       std::size_t horizon, TimeRange range, std::size_t out_features) {
    scaler.validate();
    if (scaler.mean.size() != series.features()) {
        throw Error(ErrorCode::ShapeMismatch, "scaler feature count differs from series");
    }
    if (out_features < 1 || out_features > series.features()) {
        throw Error(ErrorCode::ShapeMismatch, "out_features out of range");
    }
    if (range.end > series.timestamps() || range.begin > range.end ||
        range.size() < history_len + horizon) {
        throw Error(ErrorCode::SeriesTooShort,
                    "range of " + std::to_string(range.size()) + " timestamps cannot hold T_in + tau = " +
                        std::to_string(history_len + horizon));
    }

    WindowSet w;
    w.count = range.size() - history_len - horizon + 1;
    w.history_len = history_len;
    w.horizon = horizon;
    w.nodes = series.nodes();
    w.features = series.features();
    w.out_features = out_features;
    w.first_timestamp = range.begin;
    w.scaler = scaler;
    w.inputs.reserve(w.count * history_len * w.nodes * w.features);
    w.targets.reserve(w.count * horizon * w.nodes * out_features);
    for (std::size_t b = 0; b < w.count; ++b) {
        const std::size_t start = range.begin + b;
        for (std::size_t t = 0; t < history_len; ++t)
            for (std::size_t n = 0; n < w.nodes; ++n)
                for (std::size_t f = 0; f < w.features; ++f)
                    w.inputs.push_back(scaler.apply(series.at(start + t, n, f), f));
        for (std::size_t k = 0; k < horizon; ++k)
            for (std::size_t n = 0; n < w.nodes; ++n)
                for (std::size_t f = 0; f < out_features; ++f)
                    w.targets.push_back(series.at(start + history_len + k, n, f));
    }
    return w;
}

WindowSet make_windows(const SeriesTensor& series, const ScalerStats& scaler, std::size_t history_len,
                       std::size_t horizon, Split split, const SplitRatios& ratios,
                       std::size_t out_features) {
    const auto ranges = split_ranges(series.timestamps(), ratios);
    return make_windows(series, scaler, history_len, horizon, ranges[static_cast<std::size_t>(split)],
                        out_features);
}

Batch make_batch(const WindowSet& windows, std::span<const std::size_t> indices) {
    const auto n = static_cast<Eigen::Index>(windows.nodes);
    const auto rows = static_cast<Eigen::Index>(indices.size()) * n;
    Batch batch;
    batch.size = indices.size();
    batch.steps.assign(windows.history_len, Matrix(rows, static_cast<Eigen::Index>(windows.features)));
    batch.targets.resize(rows, static_cast<Eigen::Index>(windows.horizon * windows.out_features));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const std::size_t b = indices[i];
        if (b >= windows.count) throw Error(ErrorCode::ShapeMismatch, "window index out of range");
        for (std::size_t node = 0; node < windows.nodes; ++node) {
            const auto row = static_cast<Eigen::Index>(i * windows.nodes + node);
            for (std::size_t t = 0; t < windows.history_len; ++t)
                for (std::size_t f = 0; f < windows.features; ++f)
                    batch.steps[t](row, static_cast<Eigen::Index>(f)) = windows.input(b, t, node, f);
            for (std::size_t k = 0; k < windows.horizon; ++k)
                for (std::size_t f = 0; f < windows.out_features; ++f)
                    batch.targets(row, static_cast<Eigen::Index>(k * windows.out_features + f)) =
                        windows.target(b, k, node, f);
        }
    }
    return batch;
}

std::vector<double> unpack_forecast(const Matrix& rows, std::size_t batch, std::size_t horizon,
                                    std::size_t nodes, std::size_t out_features) {
    if (static_cast<std::size_t>(rows.rows()) != batch * nodes ||
        static_cast<std::size_t>(rows.cols()) != horizon * out_features) {
        throw Error(ErrorCode::ShapeMismatch, "forecast matrix does not match (B, tau, N, F_out)");
    }
    std::vector<double> out(batch * horizon * nodes * out_features);
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t k = 0; k < horizon; ++k)
            for (std::size_t n = 0; n < nodes; ++n)
                for (std::size_t f = 0; f < out_features; ++f)
                    out[((b * horizon + k) * nodes + n) * out_features + f] =
                        rows(static_cast<Eigen::Index>(b * nodes + n),
                             static_cast<Eigen::Index>(k * out_features + f));
    return out;
}

}  // namespace rgsl::data
