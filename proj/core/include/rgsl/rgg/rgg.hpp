#pragma once

#include <cstdint>
#include <string_view>

#include "rgsl/autodiff/var.hpp"
#include "rgsl/random.hpp"
#include "rgsl/types.hpp"

// Regularized graph generation: node embeddings -> edge log-odds -> relaxed
// Bernoulli (binary-concrete) adjacency sample.

namespace rgsl::rgg {

enum class SampleMode {
    Soft,                 ///< sigmoid((logit + g1 - g2) / s)
    HardStraightThrough,  ///< rounded forward, soft sensitivity backward
    Deterministic,        ///< sigmoid(logit / s), no noise
};

std::string_view to_string(SampleMode mode) noexcept;

/// Log-odds of keeping edge i -> j. E E^T is read directly as
/// log(theta / (1 - theta)), i.e. theta = sigmoid(E E^T).
struct EdgeLogitMatrix {
    ad::Var logits;

    const Matrix& value() const { return logits.value(); }
};

struct LearnedGraphSample {
    ad::Var adjacency;  ///< entries in [0, 1], zero diagonal
    double temperature_used = 0.0;
    SampleMode mode = SampleMode::Soft;
    std::uint64_t rng_state_id = 0;  ///< digest of the stream key, 0 when noise was supplied

    const Matrix& value() const { return adjacency.value(); }
};

double stable_sigmoid(double x) noexcept;

EdgeLogitMatrix edge_logits(NodeEmbeddingTable& embeddings);
/// Same computation on an existing graph variable (used by the model).
EdgeLogitMatrix edge_logits(const ad::Var& embeddings);

/// g1 - g2 for independent standard Gumbel draws (a standard logistic draw).
Matrix draw_gumbel_difference(Eigen::Index n, RngStream& rng);

/// Samples with caller-provided noise (g1 - g2). Noise is ignored in
/// deterministic mode and may be empty there.
LearnedGraphSample sample_adjacency(const EdgeLogitMatrix& logits, double temperature, SampleMode mode,
                                    const Matrix& noise);

LearnedGraphSample sample_adjacency(const EdgeLogitMatrix& logits, double temperature, SampleMode mode,
                                    RngStream& rng);

/// Mean of sigmoid(logits) over off-diagonal entries.
double expected_density(const Matrix& logits);

/// sigmoid(logits) with zero diagonal: the edge keep probabilities.
Matrix edge_probabilities(const Matrix& logits);

}  // namespace rgsl::rgg
