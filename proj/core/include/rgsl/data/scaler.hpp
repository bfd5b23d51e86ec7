#pragma once

#include <cstddef>
#include <filesystem>

#include "rgsl/types.hpp"

namespace rgsl::data {

inline constexpr double kStdFloor = 1e-8;

/// Per-feature mean and population std over timestamps [begin, end) and all nodes.
ScalerStats fit_scaler(const SeriesTensor& series, std::size_t begin, std::size_t end);
inline ScalerStats fit_scaler(const SeriesTensor& train_slice) {
    return fit_scaler(train_slice, 0, train_slice.timestamps());
}

void save_scaler(const std::filesystem::path& path, const ScalerStats& stats);
ScalerStats load_scaler(const std::filesystem::path& path);

}  // namespace rgsl::data
