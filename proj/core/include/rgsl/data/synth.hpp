#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rgsl/types.hpp"

namespace rgsl::data {

struct SyntheticDataset {
    SeriesTensor series;
    ExplicitGraph true_graph;
};

/// Undirected ring over `n_nodes` nodes (binary, zero diagonal).
ExplicitGraph ring_graph(std::size_t n_nodes);

/// Generates x_t = 0.5 x_{t-1} + 0.4 A_hat x_{t-1} + eps with A_hat the
/// row-normalized true graph (all-zero rows stay zero) and eps ~ N(0, noise_std^2).
/// `initial` defaults to standard-normal draws from the same stream.
SyntheticDataset synth_dataset(std::size_t n_nodes, const ExplicitGraph& true_graph, std::size_t timestamps,
                               double noise_std, std::uint64_t seed,
                               std::optional<std::vector<double>> initial = std::nullopt);

}  // namespace rgsl::data
