#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rgsl/types.hpp"

namespace rgsl::data {

enum class EdgeRule { GaussianKernel, Binary };

EdgeRule edge_rule_from_string(std::string_view name);
std::string_view to_string(EdgeRule rule) noexcept;

struct DistanceEdge {
    long long from = 0;
    long long to = 0;
    double cost = 0.0;
};

struct GraphBuildOptions {
    EdgeRule rule = EdgeRule::GaussianKernel;
    double threshold = 0.1;
    /// Kernel width; defaults to the population std of all costs (the mean
    /// cost when every cost is identical).
    std::optional<double> sigma;
};

struct GraphBuildResult {
    ExplicitGraph graph;
    std::optional<std::string> warning;
};

/// Reads a "from,to,cost" distance file.
std::vector<DistanceEdge> read_distance_csv(const std::filesystem::path& path);

GraphBuildResult build_explicit_graph(const std::vector<DistanceEdge>& edges, std::size_t n_nodes,
                                      const GraphBuildOptions& options, std::string source = {});

GraphBuildResult build_explicit_graph(const std::filesystem::path& distance_csv, std::size_t n_nodes,
                                      const GraphBuildOptions& options);

}  // namespace rgsl::data
