#pragma once

#include <string>
#include <vector>

#include "rgsl/autodiff/var.hpp"
#include "rgsl/graphops/graphops.hpp"
#include "rgsl/lm3/lm3.hpp"
#include "rgsl/random.hpp"

namespace rgsl::strgc {

/// One recurrent layer: independent mixed graph operators for the update
/// gate, the reset gate and the candidate state.
struct STRGCCellParams {
    lm3::Lm3Params update_gate;
    lm3::Lm3Params reset_gate;
    lm3::Lm3Params candidate;
    Eigen::Index input_dim = 0;
    Eigen::Index hidden_dim = 0;

    static STRGCCellParams init(Eigen::Index input_dim, Eigen::Index hidden_dim, RngStream& rng,
                                const std::string& name);
    std::vector<ad::Parameter*> parameters();
};

/// Shared, per-forward-pass inputs of every cell.
struct CellContext {
    const graphops::Propagator& explicit_prop;
    const graphops::Propagator& learned_prop;
    lm3::MixOptions mix;
    Eigen::Index blocks = 1;
};

/// Running mean of the explicit-branch gate weight, for logging.
struct GateStats {
    double alpha_explicit_sum = 0.0;
    double count = 0.0;

    void add(const ad::Var& alpha);
    double mean() const { return count > 0.0 ? alpha_explicit_sum / count : 0.0; }
};

/// z = sigmoid(M_z([x, h])), r = sigmoid(M_r([x, h])),
/// c = tanh(M_c([r * h, x])), h' = z * h + (1 - z) * c.
ad::Var cell_step(const ad::Var& x_t, const ad::Var& h_prev, STRGCCellParams& params,
                  const CellContext& ctx, GateStats* stats = nullptr);

/// Unrolls the stacked layers over the input steps from zero state; layer k
/// consumes layer k-1's hidden sequence. Returns the final state per layer.
std::vector<ad::Var> encode(const std::vector<ad::Var>& inputs, std::vector<STRGCCellParams>& layers,
                            const CellContext& ctx, GateStats* stats = nullptr);

/// Linear readout of all horizons at once.
struct ForecastHead {
    ad::Parameter projection;  // (hidden x tau*F_out)
    ad::Parameter bias;        // (1 x tau*F_out)

    static ForecastHead init(Eigen::Index hidden_dim, Eigen::Index horizon, Eigen::Index out_features,
                             RngStream& rng);
};

/// (rows x hidden) -> (rows x tau*F_out), column k*F_out + f.
ad::Var forecast(const ad::Var& h_final, ForecastHead& head);

}  // namespace rgsl::strgc
