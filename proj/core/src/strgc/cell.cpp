#include "rgsl/strgc/cell.hpp"

#include "rgsl/autodiff/ops.hpp"
#include "rgsl/error.hpp"

namespace rgsl::strgc {

STRGCCellParams STRGCCellParams::init(Eigen::Index input_dim, Eigen::Index hidden_dim, RngStream& rng,
                                      const std::string& name) {
    const Eigen::Index in = input_dim + hidden_dim;
    STRGCCellParams p{lm3::Lm3Params::init(in, hidden_dim, rng, name + ".z"),
                      lm3::Lm3Params::init(in, hidden_dim, rng, name + ".r"),
                      lm3::Lm3Params::init(in, hidden_dim, rng, name + ".c"), input_dim, hidden_dim};
    return p;
}

std::vector<ad::Parameter*> STRGCCellParams::parameters() {
    std::vector<ad::Parameter*> out;
    for (lm3::Lm3Params* gate : {&update_gate, &reset_gate, &candidate}) {
        out.insert(out.end(), {&gate->explicit_branch.weight, &gate->explicit_branch.bias,
                               &gate->learned_branch.weight, &gate->learned_branch.bias,
                               &gate->attention.score_weight, &gate->attention.score_bias});
    }
    return out;
}

void GateStats::add(const ad::Var& alpha) {
    alpha_explicit_sum += alpha.value().sum();
    count += static_cast<double>(alpha.value().size());
}

ad::Var cell_step(const ad::Var& x_t, const ad::Var& h_prev, STRGCCellParams& params,
                  const CellContext& ctx, GateStats* stats) {
    if (x_t.rows() != h_prev.rows() || x_t.cols() != params.input_dim || h_prev.cols() != params.hidden_dim) {
        throw Error(ErrorCode::ShapeMismatch, "cell input/state shapes disagree with parameters");
    }
    auto gate = [&](const ad::Var& input, lm3::Lm3Params& p) {
        auto result = lm3::lm3_forward(ctx.explicit_prop, ctx.learned_prop, input, p, ctx.mix, ctx.blocks);
        if (stats != nullptr) stats->add(result.alpha_explicit);
        return result.output;
    };
    const ad::Var xh = ad::concat_cols(x_t, h_prev);
    const ad::Var z = ad::sigmoid(gate(xh, params.update_gate));
    const ad::Var r = ad::sigmoid(gate(xh, params.reset_gate));
    const ad::Var candidate = ad::tanh(gate(ad::concat_cols(ad::mul(r, h_prev), x_t), params.candidate));
    return ad::interpolate(z, h_prev, candidate);
}

std::vector<ad::Var> encode(const std::vector<ad::Var>& inputs, std::vector<STRGCCellParams>& layers,
                            const CellContext& ctx, GateStats* stats) {
    if (inputs.empty()) throw Error(ErrorCode::ShapeMismatch, "encode needs at least one input step");
    if (layers.empty()) throw Error(ErrorCode::ShapeMismatch, "encode needs at least one layer");
    std::vector<ad::Var> sequence = inputs;
    std::vector<ad::Var> finals;
    finals.reserve(layers.size());
    for (auto& layer : layers) {
        ad::Var h = ad::constant(Matrix::Zero(sequence.front().rows(), layer.hidden_dim));
        for (auto& x_t : sequence) {
            h = cell_step(x_t, h, layer, ctx, stats);
            x_t = h;  // becomes the next layer's input
        }
        finals.push_back(h);
    }
    return finals;
}

ForecastHead ForecastHead::init(Eigen::Index hidden_dim, Eigen::Index horizon, Eigen::Index out_features,
                                RngStream& rng) {
    return {ad::Parameter("head.projection", graphops::glorot_uniform(hidden_dim, horizon * out_features, rng)),
            ad::Parameter("head.bias", Matrix::Zero(1, horizon * out_features))};
}

ad::Var forecast(const ad::Var& h_final, ForecastHead& head) {
    if (h_final.cols() != head.projection.value.rows()) {
        throw Error(ErrorCode::ShapeMismatch, "hidden width does not match forecast head");
    }
    return ad::add_row(ad::matmul(h_final, ad::leaf(head.projection)), ad::leaf(head.bias));
}

}  // namespace rgsl::strgc
