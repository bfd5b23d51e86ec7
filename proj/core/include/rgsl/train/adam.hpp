#pragma once

#include <cstdint>
#include <vector>

#include "rgsl/autodiff/var.hpp"

namespace rgsl::train {

/// First-order adaptive-moment optimizer with global gradient-norm clipping.
class Adam {
public:
    struct State {
        std::int64_t step = 0;
        std::vector<Eigen::MatrixXd> first_moment;
        std::vector<Eigen::MatrixXd> second_moment;
    };

    Adam(std::vector<ad::Parameter*> params, double learning_rate, double clip_norm,
         double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);

    /// Clips, applies one update from the accumulated gradients and returns
    /// the pre-clipping gradient norm.
    double step();
    void zero_grad();

    const State& state() const noexcept { return state_; }
    void restore(State state);
    double learning_rate() const noexcept { return lr_; }

private:
    std::vector<ad::Parameter*> params_;
    double lr_, clip_, beta1_, beta2_, eps_;
    State state_;
};

}  // namespace rgsl::train
