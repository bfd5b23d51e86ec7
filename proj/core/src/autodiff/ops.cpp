#include "rgsl/autodiff/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rgsl::ad {

namespace {

void push(const NodePtr& node, const Matrix& g) {
    if (node->requires_grad) node->accumulate(g);
}

void check(bool ok, const char* op, const std::string& what) {
    if (!ok) throw std::invalid_argument(std::string(op) + ": " + what);
}

void same_shape(const Var& a, const Var& b, const char* op) {
    check(a.rows() == b.rows() && a.cols() == b.cols(), op, "shape mismatch");
}

using ConstView = Eigen::Map<const Matrix>;
using View = Eigen::Map<Matrix>;

// A column-major (B*N x C) matrix viewed as N x (C*B): column c*B + b holds
// block b's feature c. P * view applies P to every block in one product.
ConstView blocks_view(const Matrix& m, Eigen::Index n) {
    return ConstView(m.data(), n, m.size() / n);
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
    check(a.cols() == b.rows(), "matmul", "inner dimensions differ");
    return record(a.value() * b.value(), {a, b}, [](const Matrix& g, std::vector<NodePtr>& in) {
        if (in[0]->requires_grad) in[0]->accumulate(g * in[1]->value.transpose());
        if (in[1]->requires_grad) in[1]->accumulate(in[0]->value.transpose() * g);
    });
}

Var transpose(const Var& a) {
    return record(a.value().transpose(), {a}, [](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g.transpose());
    });
}

Var add(const Var& a, const Var& b) {
    same_shape(a, b, "add");
    return record(a.value() + b.value(), {a, b}, [](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g);
        push(in[1], g);
    });
}

Var sub(const Var& a, const Var& b) {
    same_shape(a, b, "sub");
    return record(a.value() - b.value(), {a, b}, [](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g);
        push(in[1], -g);
    });
}

Var mul(const Var& a, const Var& b) {
    same_shape(a, b, "mul");
    return record(a.value().cwiseProduct(b.value()), {a, b},
                  [](const Matrix& g, std::vector<NodePtr>& in) {
                      if (in[0]->requires_grad) in[0]->accumulate(g.cwiseProduct(in[1]->value));
                      if (in[1]->requires_grad) in[1]->accumulate(g.cwiseProduct(in[0]->value));
                  });
}

Var scale(const Var& a, double factor) {
    return record(a.value() * factor, {a}, [factor](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g * factor);
    });
}

Var add_scalar(const Var& a, double offset) {
    return record(a.value().array() + offset, {a}, [](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g);
    });
}

Var add_row(const Var& a, const Var& row) {
    check(row.rows() == 1 && row.cols() == a.cols(), "add_row", "row must be 1 x cols");
    Matrix out = a.value();
    out.rowwise() += row.value().row(0);
    return record(std::move(out), {a, row}, [](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g);
        if (in[1]->requires_grad) in[1]->accumulate(g.colwise().sum());
    });
}

Var scale_rows(const Var& a, const Var& col) {
    check(col.cols() == 1 && col.rows() == a.rows(), "scale_rows", "weights must be rows x 1");
    Matrix out = col.value().col(0).asDiagonal() * a.value();
    return record(std::move(out), {a, col}, [](const Matrix& g, std::vector<NodePtr>& in) {
        if (in[0]->requires_grad) in[0]->accumulate(in[1]->value.col(0).asDiagonal() * g);
        if (in[1]->requires_grad) {
            in[1]->accumulate(g.cwiseProduct(in[0]->value).rowwise().sum());
        }
    });
}

Var concat_cols(const Var& a, const Var& b) {
    check(a.rows() == b.rows(), "concat_cols", "row counts differ");
    Matrix out(a.rows(), a.cols() + b.cols());
    out << a.value(), b.value();
    const Eigen::Index split = a.cols();
    return record(std::move(out), {a, b}, [split](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g.leftCols(split));
        push(in[1], g.rightCols(g.cols() - split));
    });
}

Var sigmoid(const Var& a) {
    Matrix out = a.value().unaryExpr([](double x) {
        // Branches keep exp() from overflowing for large |x|.
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
    });
    return record(out, {a}, [out](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g.cwiseProduct(out.cwiseProduct((1.0 - out.array()).matrix())));
    });
}

Var tanh(const Var& a) {
    Matrix out = a.value().array().tanh().matrix();
    return record(out, {a}, [out](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g.cwiseProduct((1.0 - out.array().square()).matrix()));
    });
}

Var zero_diagonal(const Var& a) {
    check(a.rows() == a.cols(), "zero_diagonal", "matrix must be square");
    Matrix out = a.value();
    out.diagonal().setZero();
    return record(std::move(out), {a}, [](const Matrix& g, std::vector<NodePtr>& in) {
        Matrix masked = g;
        masked.diagonal().setZero();
        push(in[0], masked);
    });
}

Var symmetrize(const Var& a) {
    check(a.rows() == a.cols(), "symmetrize", "matrix must be square");
    return record(0.5 * (a.value() + a.value().transpose()), {a},
                  [](const Matrix& g, std::vector<NodePtr>& in) {
                      push(in[0], 0.5 * (g + g.transpose()));
                  });
}

Var straight_through_round(const Var& a) {
    Matrix out = a.value().unaryExpr([](double x) { return x > 0.5 ? 1.0 : 0.0; });
    return record(std::move(out), {a}, [](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], g);
    });
}

Var mean_abs_error(const Var& pred, const Matrix& target) {
    check(pred.rows() == target.rows() && pred.cols() == target.cols(), "mean_abs_error",
          "shape mismatch");
    const double count = static_cast<double>(target.size());
    Matrix diff = pred.value() - target;
    Matrix out(1, 1);
    out(0, 0) = diff.cwiseAbs().sum() / count;
    return record(std::move(out), {pred},
                  [diff = std::move(diff), count](const Matrix& g, std::vector<NodePtr>& in) {
                      const double s = g(0, 0) / count;
                      push(in[0], diff.unaryExpr([s](double d) {
                          return d > 0.0 ? s : (d < 0.0 ? -s : 0.0);
                      }));
                  });
}

Var sum(const Var& a) {
    Matrix out(1, 1);
    out(0, 0) = a.value().sum();
    const auto rows = a.rows();
    const auto cols = a.cols();
    return record(std::move(out), {a}, [rows, cols](const Matrix& g, std::vector<NodePtr>& in) {
        push(in[0], Matrix::Constant(rows, cols, g(0, 0)));
    });
}

Var normalized_propagator(const Var& adjacency, double degree_floor) {
    const Matrix& adj = adjacency.value();
    check(adj.rows() == adj.cols(), "normalized_propagator", "matrix must be square");
    const Eigen::VectorXd degree = adj.rowwise().sum();
    Eigen::VectorXd inv_sqrt(degree.size());
    Eigen::VectorXd dinv_dd(degree.size());  // d(inv_sqrt)/d(degree), zero where floored
    for (Eigen::Index i = 0; i < degree.size(); ++i) {
        const bool floored = degree(i) < degree_floor;
        const double d = floored ? degree_floor : degree(i);
        inv_sqrt(i) = 1.0 / std::sqrt(d);
        dinv_dd(i) = floored ? 0.0 : -0.5 * inv_sqrt(i) / d;
    }
    Matrix out = inv_sqrt.asDiagonal() * adj * inv_sqrt.asDiagonal();
    out.diagonal().array() += 1.0;
    return record(std::move(out), {adjacency},
                  [inv_sqrt, dinv_dd](const Matrix& g, std::vector<NodePtr>& in) {
                      if (!in[0]->requires_grad) return;
                      const Matrix& a = in[0]->value;
                      // Direct path through the middle factor.
                      Matrix grad = inv_sqrt.asDiagonal() * g * inv_sqrt.asDiagonal();
                      // Path through the degrees: q_i appears on row i and column i.
                      const Matrix ga = g.cwiseProduct(a);
                      const Eigen::VectorXd dq = ga * inv_sqrt + ga.transpose() * inv_sqrt;
                      const Eigen::VectorXd dd = dq.cwiseProduct(dinv_dd);
                      grad.colwise() += dd;
                      in[0]->accumulate(grad);
                  });
}

Var propagate(const Var& propagator, const Var& x, Eigen::Index blocks) {
    const Eigen::Index n = propagator.rows();
    check(propagator.cols() == n && x.rows() == n * blocks, "propagate", "dimension mismatch");
    Matrix out(x.rows(), x.cols());
    View(out.data(), n, out.size() / n).noalias() = propagator.value() * blocks_view(x.value(), n);
    return record(std::move(out), {propagator, x}, [n](const Matrix& g, std::vector<NodePtr>& in) {
        const auto gv = blocks_view(g, n);
        if (in[0]->requires_grad) in[0]->accumulate(gv * blocks_view(in[1]->value, n).transpose());
        if (in[1]->requires_grad) {
            Matrix gx(g.rows(), g.cols());
            View(gx.data(), n, gx.size() / n).noalias() = in[0]->value.transpose() * gv;
            in[1]->accumulate(gx);
        }
    });
}

Var graph_transform(const Var& propagator, const Var& x, const Var& weight, const Var& bias,
                    Eigen::Index blocks) {
    const Eigen::Index n = propagator.rows();
    check(propagator.cols() == n && x.rows() == n * blocks, "graph_transform",
          "propagator does not match node count");
    check(weight.rows() == x.cols(), "graph_transform", "weight rows must equal feature dim");
    check(bias.rows() == 1 && bias.cols() == weight.cols(), "graph_transform", "bias must be 1 x out");

    Matrix px(x.rows(), x.cols());
    View(px.data(), n, px.size() / n).noalias() = propagator.value() * blocks_view(x.value(), n);
    Matrix out = px * weight.value();
    out.rowwise() += bias.value().row(0);
    return record(std::move(out), {propagator, x, weight, bias},
                  [n, px = std::move(px)](const Matrix& g, std::vector<NodePtr>& in) {
                      if (in[2]->requires_grad) in[2]->accumulate(px.transpose() * g);
                      if (in[3]->requires_grad) in[3]->accumulate(g.colwise().sum());
                      if (!in[0]->requires_grad && !in[1]->requires_grad) return;
                      const Matrix gpx = g * in[2]->value.transpose();
                      const auto gv = blocks_view(gpx, n);
                      if (in[0]->requires_grad) {
                          in[0]->accumulate(gv * blocks_view(in[1]->value, n).transpose());
                      }
                      if (in[1]->requires_grad) {
                          Matrix gx(gpx.rows(), gpx.cols());
                          View(gx.data(), n, gx.size() / n).noalias() = in[0]->value.transpose() * gv;
                          in[1]->accumulate(gx);
                      }
                  });
}

Var convex_combine(const Var& a, const Var& b, const Var& alpha) {
    same_shape(a, b, "convex_combine");
    check(alpha.cols() == 1 && alpha.rows() == a.rows(), "convex_combine", "alpha must be rows x 1");
    const auto& w = alpha.value().col(0);
    Matrix out = w.asDiagonal() * a.value() + (1.0 - w.array()).matrix().asDiagonal() * b.value();
    return record(std::move(out), {a, b, alpha}, [](const Matrix& g, std::vector<NodePtr>& in) {
        const auto& w = in[2]->value.col(0);
        if (in[0]->requires_grad) in[0]->accumulate(w.asDiagonal() * g);
        if (in[1]->requires_grad) {
            in[1]->accumulate((1.0 - w.array()).matrix().asDiagonal() * g);
        }
        if (in[2]->requires_grad) {
            in[2]->accumulate(g.cwiseProduct(in[0]->value - in[1]->value).rowwise().sum());
        }
    });
}

Var interpolate(const Var& gate, const Var& a, const Var& b) {
    same_shape(gate, a, "interpolate");
    same_shape(a, b, "interpolate");
    const auto z = gate.value().array();
    Matrix out = (z * a.value().array() + (1.0 - z) * b.value().array()).matrix();
    return record(std::move(out), {gate, a, b}, [](const Matrix& g, std::vector<NodePtr>& in) {
        const auto z = in[0]->value.array();
        if (in[0]->requires_grad) {
            in[0]->accumulate((g.array() * (in[1]->value.array() - in[2]->value.array())).matrix());
        }
        if (in[1]->requires_grad) in[1]->accumulate((g.array() * z).matrix());
        if (in[2]->requires_grad) in[2]->accumulate((g.array() * (1.0 - z)).matrix());
    });
}

}  // namespace rgsl::ad
