#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "rgsl/config.hpp"
#include "rgsl/data/windows.hpp"
#include "rgsl/types.hpp"

// File layout of a prepared dataset directory and of run manifests.

namespace rgsl::cli {

inline constexpr const char* kSeriesFile = "series.archive";
inline constexpr const char* kExplicitGraphFile = "explicit_graph.csv";
inline constexpr const char* kScalerFile = "scaler.json";
inline constexpr const char* kSplitsFile = "splits.json";
inline constexpr const char* kTrueGraphFile = "true_graph.csv";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kCheckpointFile = "checkpoint.bin";
inline constexpr const char* kHistoryFile = "history.csv";

struct PreparedData {
    SeriesTensor series;
    ExplicitGraph explicit_graph;
    ScalerStats scaler;
    std::array<data::TimeRange, 3> splits;
    data::SplitRatios ratios;
};

void write_splits(const std::filesystem::path& path, std::size_t timestamps, const data::SplitRatios& ratios);
std::array<data::TimeRange, 3> read_splits(const std::filesystem::path& path, data::SplitRatios* ratios = nullptr);

/// Loads every artifact `prepare` writes. Throws FileNotFound for a missing piece.
PreparedData load_prepared(const std::filesystem::path& dir);

/// Digest of the shape and values of a series.
std::string dataset_fingerprint(const SeriesTensor& series);

struct RunManifest {
    std::string command;
    std::string config_path;
    std::string config_hash;
    std::string dataset_fingerprint;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::string started_at;
};

std::string utc_timestamp();
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

}  // namespace rgsl::cli
