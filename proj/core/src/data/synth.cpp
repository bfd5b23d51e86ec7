#include "rgsl/data/synth.hpp"

#include <string>

#include "rgsl/error.hpp"
#include "rgsl/random.hpp"

namespace rgsl::data {

ExplicitGraph ring_graph(std::size_t n_nodes) {
    if (n_nodes < 3) throw Error(ErrorCode::BadShape, "a ring needs at least 3 nodes");
    const auto n = static_cast<Eigen::Index>(n_nodes);
    ExplicitGraph g;
    g.adjacency = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g.adjacency(i, (i + 1) % n) = 1.0;
        g.adjacency((i + 1) % n, i) = 1.0;
    }
    g.is_binary = true;
    g.source = "synthetic ring n=" + std::to_string(n_nodes);
    return g;
}

SyntheticDataset synth_dataset(std::size_t n_nodes, const ExplicitGraph& true_graph, std::size_t timestamps,
                               double noise_std, std::uint64_t seed,
                               std::optional<std::vector<double>> initial) {
    true_graph.validate();
    if (true_graph.nodes() != n_nodes) throw Error(ErrorCode::ShapeMismatch, "true graph size != n_nodes");
    if (!(noise_std >= 0.0)) throw Error(ErrorCode::BadConfigValue, "noise_std must be >= 0");

    const auto n = static_cast<Eigen::Index>(n_nodes);
    Matrix a_hat = true_graph.adjacency;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double row = a_hat.row(i).sum();
        if (row > 0.0) a_hat.row(i) /= row;
    }
    const Matrix transition = 0.5 * Matrix::Identity(n, n) + 0.4 * a_hat;

    RngStream rng{seed, static_cast<std::uint64_t>(StreamPurpose::Synthetic)};
    Eigen::VectorXd x(n);
    if (initial) {
        if (initial->size() != n_nodes) throw Error(ErrorCode::ShapeMismatch, "initial state size");
        for (Eigen::Index i = 0; i < n; ++i) x(i) = (*initial)[static_cast<std::size_t>(i)];
    } else {
        for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.normal();
    }

    std::vector<double> values;
    values.reserve(timestamps * n_nodes);
    for (std::size_t t = 0; t < timestamps; ++t) {
        if (t > 0) {
            Eigen::VectorXd next = transition * x;
            if (noise_std > 0.0) {
                for (Eigen::Index i = 0; i < n; ++i) next(i) += noise_std * rng.normal();
            }
            x = std::move(next);
        }
        for (Eigen::Index i = 0; i < n; ++i) values.push_back(x(i));
    }
    return {SeriesTensor(timestamps, n_nodes, 1, std::move(values), 288, {"value"}), true_graph};
}

}  // namespace rgsl::data
