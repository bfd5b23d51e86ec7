#pragma once

#include "rgsl/autodiff/var.hpp"

// Differentiable dense-matrix operations. Batched node features are stored as
// (B*N x C) matrices with rows ordered batch-major (row = b*N + n).

namespace rgsl::ad {

Var matmul(const Var& a, const Var& b);
Var transpose(const Var& a);
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);  ///< element-wise
Var scale(const Var& a, double factor);
Var add_scalar(const Var& a, double offset);
/// Adds a 1 x C row to every row of `a`.
Var add_row(const Var& a, const Var& row);
/// Multiplies row i of `a` by col(i, 0).
Var scale_rows(const Var& a, const Var& col);
Var concat_cols(const Var& a, const Var& b);

Var sigmoid(const Var& a);
Var tanh(const Var& a);

Var zero_diagonal(const Var& a);
/// (A + A^T) / 2
Var symmetrize(const Var& a);
/// Forward: round to {0, 1}. Backward: identity (straight-through).
Var straight_through_round(const Var& a);

/// mean |pred - target| as a 1x1 value.
Var mean_abs_error(const Var& pred, const Matrix& target);
Var sum(const Var& a);

/// I + D^{-1/2} A D^{-1/2} with row-sum degrees floored at `degree_floor`.
Var normalized_propagator(const Var& adjacency, double degree_floor);

/// Applies the N x N propagator to each of the `blocks` node blocks of `x`.
Var propagate(const Var& propagator, const Var& x, Eigen::Index blocks);

/// propagate(P, X) * W + b, fused so only P*X and the output are retained.
Var graph_transform(const Var& propagator, const Var& x, const Var& weight, const Var& bias,
                    Eigen::Index blocks);

/// alpha .* a + (1 - alpha) .* b for a column of per-row weights `alpha`.
Var convex_combine(const Var& a, const Var& b, const Var& alpha);

/// gate .* a + (1 - gate) .* b, element-wise.
Var interpolate(const Var& gate, const Var& a, const Var& b);

}  // namespace rgsl::ad
