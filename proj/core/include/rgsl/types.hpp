#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rgsl/autodiff/var.hpp"

namespace rgsl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense (T, N, F) series, row-major with feature as the fastest axis.
class SeriesTensor {
public:
    SeriesTensor() = default;
    SeriesTensor(std::size_t timestamps, std::size_t nodes, std::size_t features,
                 std::vector<double> values, std::size_t timestamps_per_day = 288,
                 std::vector<std::string> feature_names = {});

    std::size_t timestamps() const noexcept { return t_; }
    std::size_t nodes() const noexcept { return n_; }
    std::size_t features() const noexcept { return f_; }
    std::size_t timestamps_per_day() const noexcept { return per_day_; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }

    double at(std::size_t t, std::size_t n, std::size_t f) const { return values_[index(t, n, f)]; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Timestamps [begin, end).
    SeriesTensor slice_time(std::size_t begin, std::size_t end) const;
    /// First `count` nodes.
    SeriesTensor first_nodes(std::size_t count) const;

    /// Throws BadShape / BadFormat when an invariant does not hold.
    void validate() const;

private:
    std::size_t index(std::size_t t, std::size_t n, std::size_t f) const noexcept {
        return (t * n_ + n) * f_ + f;
    }

    std::size_t t_ = 0, n_ = 0, f_ = 0;
    std::size_t per_day_ = 288;
    std::vector<double> values_;
    std::vector<std::string> names_;
};

/// Prior adjacency. Square, non-negative, zero diagonal.
struct ExplicitGraph {
    Matrix adjacency;
    bool is_binary = false;
    std::string source;

    std::size_t nodes() const noexcept { return static_cast<std::size_t>(adjacency.rows()); }
    bool is_symmetric(double tol = 0.0) const;
    void validate() const;
};

/// Trainable node embeddings E (N x d).
struct NodeEmbeddingTable {
    ad::Parameter embeddings;

    std::size_t nodes() const noexcept { return static_cast<std::size_t>(embeddings.value.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(embeddings.value.cols()); }
    void validate() const;
};

/// Per-feature z-score statistics, fitted on the training split only.
struct ScalerStats {
    std::vector<double> mean;
    std::vector<double> std;

    double apply(double value, std::size_t feature) const { return (value - mean[feature]) / std[feature]; }
    double invert(double value, std::size_t feature) const { return value * std[feature] + mean[feature]; }
    void validate() const;
};

}  // namespace rgsl
