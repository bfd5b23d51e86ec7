#include "rgsl/rgg/rgg.hpp"

#include <cmath>

#include "rgsl/autodiff/ops.hpp"
#include "rgsl/error.hpp"

namespace rgsl::rgg {

std::string_view to_string(SampleMode mode) noexcept {
    switch (mode) {
        case SampleMode::Soft: return "soft";
        case SampleMode::HardStraightThrough: return "hard-straight-through";
        case SampleMode::Deterministic: return "deterministic";
    }
    return "soft";
}

double stable_sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

EdgeLogitMatrix edge_logits(const ad::Var& embeddings) {
    if (!embeddings.value().allFinite()) {
        throw Error(ErrorCode::NonFiniteEmbedding, "node embeddings contain NaN/Inf");
    }
    return {ad::matmul(embeddings, ad::transpose(embeddings))};
}

EdgeLogitMatrix edge_logits(NodeEmbeddingTable& embeddings) {
    return edge_logits(ad::leaf(embeddings.embeddings));
}

Matrix draw_gumbel_difference(Eigen::Index n, RngStream& rng) {
    Matrix noise(n, n);
    // Row-major fill so the stream order does not depend on storage order.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double g1 = rng.gumbel();
            const double g2 = rng.gumbel();
            noise(i, j) = g1 - g2;
        }
    return noise;
}

LearnedGraphSample sample_adjacency(const EdgeLogitMatrix& logits, double temperature, SampleMode mode,
                                    const Matrix& noise) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw Error(ErrorCode::InvalidTemperature, "temperature must be > 0");
    }
    const auto n = logits.logits.rows();
    ad::Var perturbed = logits.logits;
    if (mode != SampleMode::Deterministic) {
        if (noise.rows() != n || noise.cols() != n) {
            throw Error(ErrorCode::ShapeMismatch, "noise must match the logit matrix");
        }
        perturbed = ad::add(logits.logits, ad::constant(noise));
    }
    ad::Var soft = ad::sigmoid(ad::scale(perturbed, 1.0 / temperature));
    ad::Var sample = mode == SampleMode::HardStraightThrough ? ad::straight_through_round(soft) : soft;

    LearnedGraphSample out;
    out.adjacency = ad::zero_diagonal(sample);
    out.temperature_used = temperature;
    out.mode = mode;
    return out;
}

LearnedGraphSample sample_adjacency(const EdgeLogitMatrix& logits, double temperature, SampleMode mode,
                                    RngStream& rng) {
    if (mode == SampleMode::Deterministic) return sample_adjacency(logits, temperature, mode, Matrix{});
    const std::uint64_t id = rng.key_digest();
    auto out = sample_adjacency(logits, temperature, mode, draw_gumbel_difference(logits.logits.rows(), rng));
    out.rng_state_id = id;
    return out;
}

double expected_density(const Matrix& logits) {
    const auto n = logits.rows();
    if (n < 2) return 0.0;
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) total += stable_sigmoid(logits(i, j));
    return total / static_cast<double>(n * (n - 1));
}

Matrix edge_probabilities(const Matrix& logits) {
    Matrix p = logits.unaryExpr([](double x) { return stable_sigmoid(x); });
    p.diagonal().setZero();
    return p;
}

}  // namespace rgsl::rgg
