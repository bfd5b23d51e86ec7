#include <gtest/gtest.h>

#include <functional>

#include "finite_diff.hpp"
#include "rgsl/autodiff/ops.hpp"
#include "rgsl/random.hpp"

namespace rgsl::ad {
namespace {

using rgsl::testing::central_difference;
using rgsl::testing::relative_error;

Matrix random_matrix(Eigen::Index r, Eigen::Index c, RngStream& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = lo + (hi - lo) * rng.uniform_open();
    return m;
}

// Reduces any output to a scalar with fixed random weights so every output
// entry contributes a distinct sensitivity.
struct Probe {
    Matrix weights;
    Var apply(const Var& v) const { return sum(mul(v, constant(weights))); }
};

void expect_gradients(const std::function<Var(std::vector<Var>&)>& build, std::vector<Parameter*> params,
                      double tol = 1e-7) {
    std::vector<Var> leaves;
    for (auto* p : params) {
        p->zero_grad();
        leaves.push_back(leaf(*p));
    }
    backward(build(leaves));
    for (auto* p : params) {
        auto f = [&] {
            NoGradGuard guard;
            std::vector<Var> consts;
            for (auto* q : params) consts.push_back(constant(q->value));
            return build(consts).value()(0, 0);
        };
        const Matrix numeric = central_difference(f, p->value);
        EXPECT_LT(relative_error(p->grad, numeric), tol) << p->name;
    }
}

class OpGradients : public ::testing::Test {
protected:
    RngStream rng{11, 3};
    Probe probe(Eigen::Index r, Eigen::Index c) { return {random_matrix(r, c, rng)}; }
};

TEST_F(OpGradients, Elementary) {
    Parameter a("a", random_matrix(3, 4, rng));
    Parameter b("b", random_matrix(3, 4, rng));
    Parameter c("c", random_matrix(4, 2, rng));
    Parameter row("row", random_matrix(1, 4, rng));
    Parameter col("col", random_matrix(3, 1, rng));
    const Probe p34 = probe(3, 4), p32 = probe(3, 2), p43 = probe(4, 3), p38 = probe(3, 8);

    expect_gradients([&](auto& v) { return p34.apply(add(v[0], v[1])); }, {&a, &b});
    expect_gradients([&](auto& v) { return p34.apply(sub(v[0], v[1])); }, {&a, &b});
    expect_gradients([&](auto& v) { return p34.apply(mul(v[0], v[1])); }, {&a, &b});
    expect_gradients([&](auto& v) { return p32.apply(matmul(v[0], v[1])); }, {&a, &c});
    expect_gradients([&](auto& v) { return p43.apply(transpose(v[0])); }, {&a});
    expect_gradients([&](auto& v) { return p34.apply(scale(add_scalar(v[0], 0.3), -1.7)); }, {&a});
    expect_gradients([&](auto& v) { return p34.apply(add_row(v[0], v[1])); }, {&a, &row});
    expect_gradients([&](auto& v) { return p34.apply(scale_rows(v[0], v[1])); }, {&a, &col});
    expect_gradients([&](auto& v) { return p38.apply(concat_cols(v[0], v[1])); }, {&a, &b});
    expect_gradients([&](auto& v) { return p34.apply(sigmoid(v[0])); }, {&a});
    expect_gradients([&](auto& v) { return p34.apply(tanh(v[0])); }, {&a});
    expect_gradients([&](auto& v) { return p34.apply(interpolate(sigmoid(v[0]), v[1], tanh(v[0]))); },
                     {&a, &b});
    expect_gradients([&](auto& v) { return p34.apply(convex_combine(v[0], v[1], sigmoid(v[2]))); },
                     {&a, &b, &col});
}

TEST_F(OpGradients, SquareMatrixOps) {
    Parameter a("a", random_matrix(4, 4, rng, 0.1, 2.0));
    const Probe p = probe(4, 4);
    expect_gradients([&](auto& v) { return p.apply(zero_diagonal(v[0])); }, {&a});
    expect_gradients([&](auto& v) { return p.apply(symmetrize(v[0])); }, {&a});
    expect_gradients([&](auto& v) { return p.apply(normalized_propagator(v[0], 1e-8)); }, {&a}, 1e-6);
}

TEST_F(OpGradients, NormalizedPropagatorWithIsolatedNode) {
    Matrix adj = random_matrix(4, 4, rng, 0.1, 1.0);
    adj.row(2).setZero();
    adj.diagonal().setZero();
    Parameter a("a", adj);
    const Probe p = probe(4, 4);
    a.zero_grad();
    backward(p.apply(normalized_propagator(leaf(a), 1e-8)));
    const Matrix numeric = central_difference(
        [&] {
            NoGradGuard g;
            return p.apply(normalized_propagator(constant(a.value), 1e-8)).value()(0, 0);
        },
        a.value, 1e-7);
    // Row 2 sits on the degree floor, where the map has a kink.
    for (Eigen::Index i : {0, 1, 3}) {
        EXPECT_LT(relative_error(a.grad.row(i), numeric.row(i)), 1e-5) << "row " << i;
    }
}

TEST_F(OpGradients, BlockPropagationAndFusedTransform) {
    const Eigen::Index n = 3, blocks = 4, in = 5, out = 2;
    Parameter prop("P", random_matrix(n, n, rng));
    Parameter x("X", random_matrix(n * blocks, in, rng));
    Parameter w("W", random_matrix(in, out, rng));
    Parameter b("b", random_matrix(1, out, rng));
    const Probe p_prop = probe(n * blocks, in), p_out = probe(n * blocks, out);
    expect_gradients([&](auto& v) { return p_prop.apply(propagate(v[0], v[1], blocks)); }, {&prop, &x});
    expect_gradients([&](auto& v) { return p_out.apply(graph_transform(v[0], v[1], v[2], v[3], blocks)); },
                     {&prop, &x, &w, &b});
}

TEST(Propagate, MatchesPerBlockProducts) {
    RngStream rng{5, 5};
    const Eigen::Index n = 4, blocks = 3, c = 2;
    const Matrix p = random_matrix(n, n, rng);
    const Matrix x = random_matrix(n * blocks, c, rng);
    const Matrix got = propagate(constant(p), constant(x), blocks).value();
    for (Eigen::Index b = 0; b < blocks; ++b) {
        const Matrix expect = p * x.middleRows(b * n, n);
        EXPECT_LT((got.middleRows(b * n, n) - expect).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(MeanAbsError, ValueAndSubgradient) {
    Parameter pred("pred", (Matrix(1, 2) << 1.0, 2.0).finished());
    const Matrix target = (Matrix(1, 2) << 0.0, 4.0).finished();
    const Var loss = mean_abs_error(leaf(pred), target);
    EXPECT_DOUBLE_EQ(loss.value()(0, 0), 1.5);
    backward(loss);
    EXPECT_DOUBLE_EQ(pred.grad(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(pred.grad(0, 1), -0.5);
}

TEST(StraightThrough, RoundsForwardPassesGradient) {
    Parameter a("a", (Matrix(1, 3) << 0.2, 0.7, 0.5).finished());
    const Var r = straight_through_round(leaf(a));
    EXPECT_EQ(r.value(), (Matrix(1, 3) << 0.0, 1.0, 0.0).finished());
    backward(sum(scale(r, 2.0)));
    EXPECT_EQ(a.grad, Matrix::Constant(1, 3, 2.0));
}

TEST(NoGrad, DropsGraph) {
    Parameter a("a", Matrix::Ones(2, 2));
    NoGradGuard guard;
    const Var y = sigmoid(leaf(a));
    EXPECT_FALSE(y.requires_grad());
    EXPECT_TRUE(y.node()->inputs.empty());
}

TEST(Backward, SharedSubexpressionAccumulates) {
    Parameter a("a", Matrix::Constant(1, 1, 3.0));
    const Var x = leaf(a);
    const Var y = mul(x, x);  // x^2
    backward(sum(add(y, y)));  // 2 x^2 -> 4x
    EXPECT_DOUBLE_EQ(a.grad(0, 0), 12.0);
}

}  // namespace
}  // namespace rgsl::ad
