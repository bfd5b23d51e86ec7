#include "rgsl/train/adam.hpp"

#include <cmath>

#include "rgsl/error.hpp"

namespace rgsl::train {

Adam::Adam(std::vector<ad::Parameter*> params, double learning_rate, double clip_norm, double beta1,
           double beta2, double epsilon)
    : params_(std::move(params)), lr_(learning_rate), clip_(clip_norm), beta1_(beta1), beta2_(beta2),
      eps_(epsilon) {
    for (auto* p : params_) {
        state_.first_moment.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
        state_.second_moment.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
    }
}

void Adam::zero_grad() {
    for (auto* p : params_) p->zero_grad();
}

double Adam::step() {
    double sq = 0.0;
    for (auto* p : params_) {
        if (p->grad.size() == 0) p->zero_grad();
        sq += p->grad.squaredNorm();
    }
    const double norm = std::sqrt(sq);
    const double factor = norm > clip_ ? clip_ / norm : 1.0;

    ++state_.step;
    const double t = static_cast<double>(state_.step);
    const double correction1 = 1.0 - std::pow(beta1_, t);
    const double correction2 = 1.0 - std::pow(beta2_, t);
    for (std::size_t i = 0; i < params_.size(); ++i) {
        auto& m = state_.first_moment[i];
        auto& v = state_.second_moment[i];
        const Eigen::MatrixXd g = params_[i]->grad * factor;
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
        if (lr_ == 0.0) continue;
        params_[i]->value.array() -=
            lr_ * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps_);
    }
    return norm;
}

void Adam::restore(State state) {
    if (state.first_moment.size() != params_.size() || state.second_moment.size() != params_.size()) {
        throw Error(ErrorCode::ConfigMismatch, "optimizer state does not match parameter list");
    }
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (state.first_moment[i].rows() != params_[i]->value.rows() ||
            state.first_moment[i].cols() != params_[i]->value.cols()) {
            throw Error(ErrorCode::ConfigMismatch, "optimizer moment shape mismatch");
        }
    }
    state_ = std::move(state);
}

}  // namespace rgsl::train
