#include "rgsl/lm3/lm3.hpp"

#include "rgsl/autodiff/ops.hpp"
#include "rgsl/error.hpp"

namespace rgsl::lm3 {

MixAttentionParams MixAttentionParams::init(Eigen::Index feature_dim, RngStream& rng,
                                            const std::string& name) {
    return {ad::Parameter(name + ".score_weight", graphops::glorot_uniform(feature_dim, 1, rng)),
            ad::Parameter(name + ".score_bias", Matrix::Zero(1, 1))};
}

Lm3Params Lm3Params::init(Eigen::Index in_dim, Eigen::Index out_dim, RngStream& rng, const std::string& name) {
    auto explicit_branch = graphops::BranchParams::init(in_dim, out_dim, rng, name + ".explicit");
    auto learned_branch = graphops::BranchParams::init(in_dim, out_dim, rng, name + ".learned");
    auto attention = MixAttentionParams::init(out_dim, rng, name + ".attention");
    return {std::move(explicit_branch), std::move(learned_branch), std::move(attention)};
}

namespace {

void check_pair(const ad::Var& h0, const ad::Var& hl) {
    if (h0.rows() != hl.rows() || h0.cols() != hl.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "branch outputs differ in shape");
    }
}

MixResult single_branch(const ad::Var& h, double alpha_explicit) {
    const Matrix a0 = Matrix::Constant(h.rows(), 1, alpha_explicit);
    return {h, ad::constant(a0), ad::constant((1.0 - a0.array()).matrix())};
}

}  // namespace

MixResult mix(const ad::Var& h0, const ad::Var& hl, MixAttentionParams& params) {
    check_pair(h0, hl);
    if (params.score_weight.value.rows() != h0.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "score weight does not match feature width");
    }
    const ad::Var w = ad::leaf(params.score_weight);
    const ad::Var b = ad::leaf(params.score_bias);
    const ad::Var e0 = ad::add_row(ad::matmul(h0, w), b);
    const ad::Var el = ad::add_row(ad::matmul(hl, w), b);
    // Two-way softmax: alpha0 = exp(e0) / (exp(e0) + exp(el)) = sigmoid(e0 - el).
    ad::Var alpha0 = ad::sigmoid(ad::sub(e0, el));
    ad::Var alphal = ad::sigmoid(ad::sub(el, e0));
    return {ad::convex_combine(h0, hl, alpha0), alpha0, alphal};
}

MixResult mix_fixed(const ad::Var& h0, const ad::Var& hl, double alpha_explicit) {
    check_pair(h0, hl);
    const Matrix a0 = Matrix::Constant(h0.rows(), 1, alpha_explicit);
    ad::Var alpha0 = ad::constant(a0);
    return {ad::convex_combine(h0, hl, alpha0), alpha0, ad::constant((1.0 - a0.array()).matrix())};
}

MixResult lm3_forward(const graphops::Propagator& explicit_prop, const graphops::Propagator& learned_prop,
                      const ad::Var& x, Lm3Params& params, const MixOptions& options, Eigen::Index blocks) {
    if (explicit_prop.nodes() != learned_prop.nodes()) {
        throw Error(ErrorCode::ShapeMismatch, "explicit and learned graphs differ in size");
    }
    switch (options.mode) {
        case MixMode::ExplicitOnly:
        case MixMode::NoGraph:
            return single_branch(graphops::graph_transform(explicit_prop, x, params.explicit_branch, blocks), 1.0);
        case MixMode::ImplicitOnly:
            return single_branch(graphops::graph_transform(learned_prop, x, params.learned_branch, blocks), 0.0);
        case MixMode::HalfSum:
        case MixMode::Attention:
            break;
    }
    const ad::Var h0 = graphops::graph_transform(explicit_prop, x, params.explicit_branch, blocks);
    const ad::Var hl = graphops::graph_transform(learned_prop, x, params.learned_branch, blocks);
    if (options.mode == MixMode::HalfSum) return mix_fixed(h0, hl, 0.5);
    if (options.forced_alpha_explicit) return mix_fixed(h0, hl, *options.forced_alpha_explicit);
    return mix(h0, hl, params.attention);
}

}  // namespace rgsl::lm3
