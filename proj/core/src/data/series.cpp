#include "rgsl/data/series.hpp"

#include <cmath>
#include <string>

#include "rgsl/data/npz.hpp"
#include "rgsl/error.hpp"

namespace rgsl::data {

void clean_missing(std::vector<double>& values, std::size_t timestamps, std::size_t nodes,
                   std::size_t features) {
    const std::size_t stride = nodes * features;
    for (std::size_t col = 0; col < stride; ++col) {
        auto at = [&](std::size_t t) -> double& { return values[t * stride + col]; };

        double total = 0.0;
        std::size_t finite = 0;
        for (std::size_t t = 0; t < timestamps; ++t) {
            if (std::isfinite(at(t))) {
                total += at(t);
                ++finite;
            }
        }
        if (finite == 0) {
            throw Error(ErrorCode::AllMissingColumn,
                        "node " + std::to_string(col / features) + ", feature " +
                            std::to_string(col % features) + " has no finite value");
        }
        if (finite == timestamps) continue;
        const double mean = total / static_cast<double>(finite);

        std::size_t t = 0;
        std::ptrdiff_t last_finite = -1;
        while (t < timestamps) {
            if (std::isfinite(at(t))) {
                last_finite = static_cast<std::ptrdiff_t>(t++);
                continue;
            }
            std::size_t gap_end = t;
            while (gap_end < timestamps && !std::isfinite(at(gap_end))) ++gap_end;
            if (last_finite < 0 || gap_end == timestamps) {
                for (std::size_t k = t; k < gap_end; ++k) at(k) = mean;
            } else {
                const auto left = static_cast<std::size_t>(last_finite);
                const double v0 = at(left);
                const double v1 = at(gap_end);
                const double span = static_cast<double>(gap_end - left);
                for (std::size_t k = t; k < gap_end; ++k) {
                    at(k) = v0 + (v1 - v0) * static_cast<double>(k - left) / span;
                }
            }
            t = gap_end;
        }
    }
}

SeriesTensor load_series_archive(const std::filesystem::path& path, std::size_t timestamps_per_day) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::FileNotFound, path.string());
    auto arrays = read_npz(path);
    auto it = arrays.find("data");
    if (it == arrays.end()) throw Error(ErrorCode::BadFormat, path.string() + " has no 'data' array");
    NpyArray& array = it->second;
    if (array.shape.size() != 3) {
        throw Error(ErrorCode::BadShape, "'data' must be 3-D (T, N, F), got rank " +
                                             std::to_string(array.shape.size()));
    }
    const auto [t, n, f] = std::tuple{array.shape[0], array.shape[1], array.shape[2]};
    clean_missing(array.values, t, n, f);
    return SeriesTensor(t, n, f, std::move(array.values), timestamps_per_day);
}

void write_series_archive(const std::filesystem::path& path, const SeriesTensor& series) {
    NpyArray array;
    array.shape = {series.timestamps(), series.nodes(), series.features()};
    array.values = series.values();
    write_npz(path, {{"data", std::move(array)}});
}

}  // namespace rgsl::data
