#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "rgsl/types.hpp"

namespace rgsl::data {

/// Fills missing values (NaN/Inf) per (node, feature) column: interior gaps
/// by linear interpolation along time, leading/trailing gaps with the column
/// mean of the finite values. Throws AllMissingColumn for an empty column.
void clean_missing(std::vector<double>& values, std::size_t timestamps, std::size_t nodes,
                   std::size_t features);

/// Loads the "data" member, shape (T, N, F), from a series archive.
SeriesTensor load_series_archive(const std::filesystem::path& path,
                                 std::size_t timestamps_per_day = 288);

void write_series_archive(const std::filesystem::path& path, const SeriesTensor& series);

}  // namespace rgsl::data
