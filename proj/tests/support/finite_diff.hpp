#pragma once

// Test-only gradient oracle: central finite differences, independent of the
// reverse-mode implementation under test.

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace rgsl::testing {

/// d f / d x by central differences, perturbing `x` in place and restoring it.
inline Eigen::MatrixXd central_difference(const std::function<double()>& f, Eigen::MatrixXd& x,
                                          double step = 1e-6) {
    Eigen::MatrixXd grad(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double saved = x.data()[i];
        x.data()[i] = saved + step;
        const double up = f();
        x.data()[i] = saved - step;
        const double down = f();
        x.data()[i] = saved;
        grad.data()[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

/// ||a - b|| / max(||a||, ||b||); 0 when both vanish.
inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = std::max(a.norm(), b.norm());
    if (scale == 0.0) return 0.0;
    return (a - b).norm() / scale;
}

}  // namespace rgsl::testing
