#pragma once

#include <optional>
#include <string>

#include "rgsl/autodiff/var.hpp"
#include "rgsl/config.hpp"
#include "rgsl/graphops/graphops.hpp"
#include "rgsl/random.hpp"

// Laplacian matrix mix-up: the explicit-branch and learned-branch graph
// transforms are fused by a per-node two-way softmax gate whose scoring
// network is shared by both branches.

namespace rgsl::lm3 {

/// Scoring network: e = h * score_weight + score_bias, one score per node.
struct MixAttentionParams {
    ad::Parameter score_weight;  // (H x 1)
    ad::Parameter score_bias;    // (1 x 1)

    static MixAttentionParams init(Eigen::Index feature_dim, RngStream& rng, const std::string& name);
};

struct MixResult {
    ad::Var output;
    ad::Var alpha_explicit;  ///< (rows x 1)
    ad::Var alpha_learned;   ///< (rows x 1)
};

/// alpha = softmax(e0, el) per node; output = alpha0 * h0 + alphal * hl.
MixResult mix(const ad::Var& h0, const ad::Var& hl, MixAttentionParams& params);

/// Same combination with fixed weights (alpha0, 1 - alpha0).
MixResult mix_fixed(const ad::Var& h0, const ad::Var& hl, double alpha_explicit);

/// Parameters of one mixed graph operator.
struct Lm3Params {
    graphops::BranchParams explicit_branch;
    graphops::BranchParams learned_branch;
    MixAttentionParams attention;

    static Lm3Params init(Eigen::Index in_dim, Eigen::Index out_dim, RngStream& rng, const std::string& name);
};

struct MixOptions {
    MixMode mode = MixMode::Attention;
    /// Attention mode only: replaces the learned gate by (alpha0, 1 - alpha0).
    std::optional<double> forced_alpha_explicit;
};

/// mix(graph_transform(P0, X, b0), graph_transform(Pl, X, bl), attn). In the
/// single-branch modes only the surviving branch is evaluated.
MixResult lm3_forward(const graphops::Propagator& explicit_prop, const graphops::Propagator& learned_prop,
                      const ad::Var& x, Lm3Params& params, const MixOptions& options = {},
                      Eigen::Index blocks = 1);

}  // namespace rgsl::lm3
