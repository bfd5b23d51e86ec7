#include "rgsl/graphops/graphops.hpp"

#include <cmath>

#include "rgsl/autodiff/ops.hpp"
#include "rgsl/error.hpp"

namespace rgsl::graphops {

Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = bound * (2.0 * rng.uniform_open() - 1.0);
    return m;
}

BranchParams BranchParams::init(Eigen::Index in_dim, Eigen::Index out_dim, RngStream& rng,
                                const std::string& name) {
    return {ad::Parameter(name + ".weight", glorot_uniform(in_dim, out_dim, rng)),
            ad::Parameter(name + ".bias", Matrix::Zero(1, out_dim))};
}

Propagator normalize_adjacency(const ad::Var& adjacency, GraphSource source) {
    const Matrix& a = adjacency.value();
    if (a.rows() != a.cols()) throw Error(ErrorCode::NonSquare, "adjacency must be square");
    if ((a.array() < 0.0).any()) throw Error(ErrorCode::NegativeEntry, "adjacency has negative entries");
    return {ad::normalized_propagator(adjacency, kDegreeFloor), source};
}

Propagator normalize_adjacency(const Matrix& adjacency, GraphSource source) {
    return normalize_adjacency(ad::constant(adjacency), source);
}

Propagator identity_propagator(Eigen::Index nodes, GraphSource source) {
    return {ad::constant(Matrix::Identity(nodes, nodes)), source};
}

ad::Var graph_transform(const Propagator& propagator, const ad::Var& x, BranchParams& params,
                        Eigen::Index blocks) {
    if (x.rows() != propagator.nodes() * blocks) {
        throw Error(ErrorCode::DimMismatch, "feature rows do not match propagator size");
    }
    if (x.cols() != params.in_dim()) {
        throw Error(ErrorCode::DimMismatch, "feature width " + std::to_string(x.cols()) +
                                                " != weight rows " + std::to_string(params.in_dim()));
    }
    return ad::graph_transform(propagator.matrix, x, ad::leaf(params.weight), ad::leaf(params.bias), blocks);
}

}  // namespace rgsl::graphops
