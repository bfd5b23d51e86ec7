#include "cli/artifacts.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "rgsl/data/scaler.hpp"
#include "rgsl/data/series.hpp"
#include "rgsl/error.hpp"
#include "rgsl/graph_io.hpp"

namespace rgsl::cli {

using nlohmann::json;

namespace {

json range_json(const data::TimeRange& r) { return json::array({r.begin, r.end}); }

data::TimeRange range_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::BadFormat, "split range must be [begin, end]");
    return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

void require(const std::filesystem::path& p) {
    if (!std::filesystem::exists(p)) throw Error(ErrorCode::FileNotFound, p.string());
}

}  // namespace

void write_splits(const std::filesystem::path& path, std::size_t timestamps, const data::SplitRatios& ratios) {
    const auto r = data::split_ranges(timestamps, ratios);
    json doc{{"timestamps", timestamps},
             {"ratios", {ratios.train, ratios.val, ratios.test}},
             {"train", range_json(r[0])},
             {"val", range_json(r[1])},
             {"test", range_json(r[2])}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

std::array<data::TimeRange, 3> read_splits(const std::filesystem::path& path, data::SplitRatios* ratios) {
    require(path);
    std::ifstream in(path);
    json doc;
    try {
        doc = json::parse(in);
        if (ratios != nullptr) {
            const auto& r = doc.at("ratios");
            *ratios = {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()};
        }
        return {range_from(doc.at("train")), range_from(doc.at("val")), range_from(doc.at("test"))};
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadFormat, path.string() + ": " + e.what());
    }
}

PreparedData load_prepared(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::FileNotFound, dir.string());
    for (const char* name : {kSeriesFile, kExplicitGraphFile, kScalerFile, kSplitsFile}) require(dir / name);
    PreparedData p;
    p.series = data::load_series_archive(dir / kSeriesFile);
    p.explicit_graph.adjacency = read_matrix_csv(dir / kExplicitGraphFile);
    p.explicit_graph.is_binary =
        ((p.explicit_graph.adjacency.array() == 0.0) || (p.explicit_graph.adjacency.array() == 1.0)).all();
    p.explicit_graph.source = (dir / kExplicitGraphFile).string();
    p.explicit_graph.validate();
    if (p.explicit_graph.nodes() != p.series.nodes()) {
        throw Error(ErrorCode::ShapeMismatch, "explicit graph and series disagree on the node count");
    }
    p.scaler = data::load_scaler(dir / kScalerFile);
    p.splits = read_splits(dir / kSplitsFile, &p.ratios);
    if (p.splits[2].end != p.series.timestamps()) {
        throw Error(ErrorCode::ShapeMismatch, "splits do not cover the series");
    }
    return p;
}

std::string dataset_fingerprint(const SeriesTensor& series) {
    const std::size_t shape[3] = {series.timestamps(), series.nodes(), series.features()};
    std::uint64_t h = fnv1a64({reinterpret_cast<const char*>(shape), sizeof shape});
    const auto& v = series.values();
    h = fnv1a64({reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double)}, h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
    json doc{{"command", m.command},
             {"config_path", m.config_path},
             {"config_hash", m.config_hash},
             {"dataset_fingerprint", m.dataset_fingerprint},
             {"seed", m.seed},
             {"output_dir", m.output_dir},
             {"started_at", m.started_at}};
    std::ofstream out(dir / kManifestFile, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write manifest in " + dir.string());
    out << doc.dump(2) << '\n';
}

}  // namespace rgsl::cli
