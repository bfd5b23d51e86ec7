#pragma once

#include <optional>
#include <vector>

#include "rgsl/config.hpp"
#include "rgsl/data/windows.hpp"
#include "rgsl/graphops/graphops.hpp"
#include "rgsl/rgg/rgg.hpp"
#include "rgsl/strgc/cell.hpp"
#include "rgsl/types.hpp"

namespace rgsl::strgc {

struct ForwardOptions {
    rgg::SampleMode mode = rgg::SampleMode::Soft;
    /// Frozen Gumbel difference noise (N x N); takes precedence over `rng`.
    const Matrix* noise = nullptr;
    RngStream* rng = nullptr;
    std::optional<double> forced_alpha_explicit;
};

struct ForwardOutput {
    ad::Var prediction;  ///< (B*N x tau*F_out), original units
    ad::Var normalized;  ///< same, before inverse scaling
    std::optional<rgg::LearnedGraphSample> graph;
    Matrix logits;
    double mean_alpha_explicit = 0.0;
};

/// Embeddings, per-layer gate bundles and the forecast head, together with the
/// fixed explicit graph and the scaler used to map outputs back to data units.
class RGSLModel {
public:
    /// Parameters are initialized from cfg.seed. cfg.n_nodes must match the graph.
    RGSLModel(const RGSLConfig& cfg, ExplicitGraph explicit_graph, ScalerStats scaler);

    ForwardOutput forward(const data::Batch& batch, const ForwardOptions& options);

    /// Sampling mode used for training, or for evaluation when `eval` is set.
    rgg::SampleMode sample_mode(bool eval) const;

    std::vector<ad::Parameter*> parameters();
    void zero_grad();

    const RGSLConfig& config() const noexcept { return cfg_; }
    MixMode mix_mode() const noexcept { return mix_mode_; }
    const ExplicitGraph& explicit_graph() const noexcept { return explicit_graph_; }
    const ScalerStats& scaler() const noexcept { return scaler_; }
    NodeEmbeddingTable& embeddings() noexcept { return embeddings_; }
    std::vector<STRGCCellParams>& layers() noexcept { return layers_; }
    ForecastHead& head() noexcept { return head_; }

    /// E E^T for the current embeddings.
    Matrix edge_logits() const;

private:
    RGSLConfig cfg_;
    MixMode mix_mode_;
    ExplicitGraph explicit_graph_;
    ScalerStats scaler_;
    graphops::Propagator explicit_prop_;
    NodeEmbeddingTable embeddings_;
    std::vector<STRGCCellParams> layers_;
    ForecastHead head_;
};

}  // namespace rgsl::strgc
