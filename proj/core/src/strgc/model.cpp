#include "rgsl/strgc/model.hpp"

#include "rgsl/autodiff/ops.hpp"
#include "rgsl/error.hpp"

namespace rgsl::strgc {

RGSLModel::RGSLModel(const RGSLConfig& cfg, ExplicitGraph explicit_graph, ScalerStats scaler)
    : cfg_(validate_config(cfg)),
      mix_mode_(mix_mode_from_string(cfg_.mix_mode)),
      explicit_graph_(std::move(explicit_graph)),
      scaler_(std::move(scaler)) {
    explicit_graph_.validate();
    scaler_.validate();
    const auto n = static_cast<Eigen::Index>(explicit_graph_.nodes());
    if (cfg_.n_nodes != 0 && cfg_.n_nodes != n) {
        throw Error(ErrorCode::ConfigMismatch, "config n_nodes differs from the explicit graph");
    }
    cfg_.n_nodes = n;
    if (n < 2) throw Error(ErrorCode::NonPositiveDimension, "model needs at least 2 nodes");
    if (static_cast<std::int64_t>(scaler_.mean.size()) != cfg_.n_features) {
        throw Error(ErrorCode::ConfigMismatch, "scaler feature count differs from n_features");
    }

    explicit_prop_ = mix_mode_ == MixMode::NoGraph
                         ? graphops::identity_propagator(n, graphops::GraphSource::Explicit)
                         : graphops::normalize_adjacency(explicit_graph_.adjacency, graphops::GraphSource::Explicit);

    RngStream rng{cfg_.seed, static_cast<std::uint64_t>(StreamPurpose::Init)};
    Matrix e(n, cfg_.embed_dim);
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) e(i, j) = cfg_.embed_init_std * rng.normal();
    embeddings_.embeddings = ad::Parameter("embeddings", std::move(e));

    Eigen::Index input_dim = cfg_.n_features;
    for (std::int64_t layer = 0; layer < cfg_.n_recurrent_layers; ++layer) {
        layers_.push_back(
            STRGCCellParams::init(input_dim, cfg_.hidden_dim, rng, "layer" + std::to_string(layer)));
        input_dim = cfg_.hidden_dim;
    }
    head_ = ForecastHead::init(cfg_.hidden_dim, cfg_.horizon, cfg_.n_out_features, rng);
}

rgg::SampleMode RGSLModel::sample_mode(bool eval) const {
    if (eval && cfg_.deterministic_eval) return rgg::SampleMode::Deterministic;
    return cfg_.hard_sampling ? rgg::SampleMode::HardStraightThrough : rgg::SampleMode::Soft;
}

std::vector<ad::Parameter*> RGSLModel::parameters() {
    std::vector<ad::Parameter*> out{&embeddings_.embeddings};
    for (auto& layer : layers_) {
        auto p = layer.parameters();
        out.insert(out.end(), p.begin(), p.end());
    }
    out.push_back(&head_.projection);
    out.push_back(&head_.bias);
    return out;
}

void RGSLModel::zero_grad() {
    for (auto* p : parameters()) p->zero_grad();
}

Matrix RGSLModel::edge_logits() const {
    const Matrix& e = embeddings_.embeddings.value;
    return e * e.transpose();
}

ForwardOutput RGSLModel::forward(const data::Batch& batch, const ForwardOptions& options) {
    const auto n = static_cast<Eigen::Index>(explicit_graph_.nodes());
    const auto blocks = static_cast<Eigen::Index>(batch.size);
    if (batch.steps.size() != static_cast<std::size_t>(cfg_.history_len)) {
        throw Error(ErrorCode::ConfigMismatch, "batch history length differs from config");
    }
    for (const auto& step : batch.steps) {
        if (step.rows() != n * blocks || step.cols() != cfg_.n_features) {
            throw Error(ErrorCode::ConfigMismatch, "batch step shape differs from (B*N x F)");
        }
    }

    ForwardOutput out;
    embeddings_.validate();
    const bool needs_learned = mix_mode_ != MixMode::ExplicitOnly && mix_mode_ != MixMode::NoGraph;
    graphops::Propagator learned_prop = graphops::identity_propagator(n, graphops::GraphSource::Learned);
    if (needs_learned) {
        const auto logits = rgg::edge_logits(embeddings_);
        out.logits = logits.value();
        rgg::LearnedGraphSample sample;
        if (options.noise != nullptr || options.mode == rgg::SampleMode::Deterministic) {
            static const Matrix kEmpty;
            sample = rgg::sample_adjacency(logits, cfg_.temperature, options.mode,
                                           options.noise != nullptr ? *options.noise : kEmpty);
        } else {
            if (options.rng == nullptr) throw Error(ErrorCode::BadConfigValue, "stochastic forward needs an rng");
            sample = rgg::sample_adjacency(logits, cfg_.temperature, options.mode, *options.rng);
        }
        ad::Var adjacency = cfg_.symmetrize_sample ? ad::symmetrize(sample.adjacency) : sample.adjacency;
        learned_prop = graphops::normalize_adjacency(adjacency, graphops::GraphSource::Learned);
        out.graph = std::move(sample);
    } else {
        out.logits = edge_logits();
    }

    CellContext ctx{explicit_prop_, learned_prop, {mix_mode_, options.forced_alpha_explicit}, blocks};
    std::vector<ad::Var> inputs;
    inputs.reserve(batch.steps.size());
    for (const auto& step : batch.steps) inputs.push_back(ad::constant(step));
    GateStats stats;
    const auto finals = encode(inputs, layers_, ctx, &stats);
    out.normalized = forecast(finals.back(), head_);
    out.mean_alpha_explicit = stats.mean();

    // Inverse scaling of output feature f in every horizon column.
    const auto f_out = cfg_.n_out_features;
    const auto cols = cfg_.horizon * f_out;
    Matrix scale = Matrix::Zero(cols, cols);
    Matrix shift(1, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        const auto f = static_cast<std::size_t>(c % f_out);
        scale(c, c) = scaler_.std[f];
        shift(0, c) = scaler_.mean[f];
    }
    out.prediction = ad::add_row(ad::matmul(out.normalized, ad::constant(scale)), ad::constant(shift));
    return out;
}

}  // namespace rgsl::strgc
