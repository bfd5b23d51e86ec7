#include "rgsl/data/scaler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "rgsl/error.hpp"

namespace rgsl::data {

ScalerStats fit_scaler(const SeriesTensor& series, std::size_t begin, std::size_t end) {
    if (begin >= end || end > series.timestamps()) {
        throw Error(ErrorCode::EmptyTrainSlice, "training slice is empty");
    }
    const std::size_t features = series.features();
    ScalerStats stats;
    stats.mean.assign(features, 0.0);
    stats.std.assign(features, 0.0);
    const double count = static_cast<double>((end - begin) * series.nodes());
    for (std::size_t f = 0; f < features; ++f) {
        double total = 0.0;
        for (std::size_t t = begin; t < end; ++t)
            for (std::size_t n = 0; n < series.nodes(); ++n) total += series.at(t, n, f);
        const double mean = total / count;
        double sq = 0.0;
        for (std::size_t t = begin; t < end; ++t)
            for (std::size_t n = 0; n < series.nodes(); ++n) {
                const double d = series.at(t, n, f) - mean;
                sq += d * d;
            }
        stats.mean[f] = mean;
        stats.std[f] = std::max(std::sqrt(sq / count), kStdFloor);
    }
    return stats;
}

void save_scaler(const std::filesystem::path& path, const ScalerStats& stats) {
    nlohmann::json doc{{"mean", stats.mean}, {"std", stats.std}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

ScalerStats load_scaler(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    ScalerStats stats;
    try {
        const auto doc = nlohmann::json::parse(in);
        doc.at("mean").get_to(stats.mean);
        doc.at("std").get_to(stats.std);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadFormat, path.string() + ": " + e.what());
    }
    stats.validate();
    return stats;
}

}  // namespace rgsl::data
