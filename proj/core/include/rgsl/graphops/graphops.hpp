#pragma once

#include <string>

#include "rgsl/autodiff/var.hpp"
#include "rgsl/random.hpp"
#include "rgsl/types.hpp"

namespace rgsl::graphops {

inline constexpr double kDegreeFloor = 1e-8;

enum class GraphSource { Explicit, Learned };

/// I + D^{-1/2} A D^{-1/2}, the first-order propagation operator.
struct Propagator {
    ad::Var matrix;
    GraphSource source = GraphSource::Explicit;

    const Matrix& value() const { return matrix.value(); }
    Eigen::Index nodes() const { return matrix.rows(); }
};

/// Weight (in x out) and bias (1 x out) of one graph branch.
struct BranchParams {
    ad::Parameter weight;
    ad::Parameter bias;

    /// Glorot-uniform weight, zero bias.
    static BranchParams init(Eigen::Index in_dim, Eigen::Index out_dim, RngStream& rng,
                             const std::string& name);
    Eigen::Index in_dim() const { return weight.value.rows(); }
    Eigen::Index out_dim() const { return weight.value.cols(); }
};

/// Row-sum degrees, floored at kDegreeFloor. Differentiable in A.
Propagator normalize_adjacency(const ad::Var& adjacency, GraphSource source);
Propagator normalize_adjacency(const Matrix& adjacency, GraphSource source);

/// Identity propagator (the empty graph).
Propagator identity_propagator(Eigen::Index nodes, GraphSource source);

/// P X W + b on each of `blocks` stacked node blocks of X ((blocks*N) x in).
ad::Var graph_transform(const Propagator& propagator, const ad::Var& x, BranchParams& params,
                        Eigen::Index blocks = 1);

/// Glorot-uniform initialisation shared by every trainable weight.
Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, RngStream& rng);

}  // namespace rgsl::graphops
