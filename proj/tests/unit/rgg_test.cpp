#include <gtest/gtest.h>

#include <cmath>

#include "expect_error.hpp"
#include "finite_diff.hpp"
#include "rgsl/autodiff/ops.hpp"
#include "rgsl/rgg/rgg.hpp"

namespace rgsl::rgg {
namespace {

using rgsl::testing::error_code_of;

EdgeLogitMatrix constant_logits(const Matrix& m) { return {ad::constant(m)}; }

double logit(double p) { return std::log(p / (1.0 - p)); }

TEST(EdgeLogits, ZeroEmbeddingGivesHalf) {
    NodeEmbeddingTable e{ad::Parameter("E", Matrix::Zero(4, 3))};
    const auto l = edge_logits(e);
    EXPECT_TRUE(l.value().isZero());
    EXPECT_DOUBLE_EQ(expected_density(l.value()), 0.5);
}

TEST(EdgeLogits, OrthonormalRows) {
    NodeEmbeddingTable e{ad::Parameter("E", Matrix::Identity(2, 2))};
    const auto l = edge_logits(e);
    EXPECT_EQ(l.value(), Matrix::Identity(2, 2));
    const Matrix p = edge_probabilities(l.value());
    EXPECT_EQ(p(0, 1), 0.5);
    EXPECT_EQ(p(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(stable_sigmoid(l.value()(0, 0)), 1.0 / (1.0 + std::exp(-1.0)));
}

TEST(EdgeLogits, RowScalingIsBilinear) {
    RngStream rng{3, 3};
    Matrix base(4, 2);
    for (Eigen::Index i = 0; i < base.size(); ++i) base.data()[i] = rng.normal();
    NodeEmbeddingTable e{ad::Parameter("E", base)};
    const Matrix l0 = edge_logits(e).value();
    e.embeddings.value.row(1) *= 3.0;
    const Matrix l1 = edge_logits(e).value();
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) {
            const double factor = (i == 1 ? 3.0 : 1.0) * (j == 1 ? 3.0 : 1.0);
            EXPECT_NEAR(l1(i, j), factor * l0(i, j), 1e-12);
        }
}

TEST(EdgeLogits, NonFiniteRejected) {
    NodeEmbeddingTable e{ad::Parameter("E", Matrix::Zero(2, 2))};
    e.embeddings.value(0, 0) = std::nan("");
    EXPECT_EQ(error_code_of([&] { edge_logits(e); }), ErrorCode::NonFiniteEmbedding);
}

TEST(Sample, InvalidTemperature) {
    RngStream rng{1};
    const auto l = constant_logits(Matrix::Zero(2, 2));
    EXPECT_EQ(error_code_of([&] { sample_adjacency(l, 0.0, SampleMode::Soft, rng); }),
              ErrorCode::InvalidTemperature);
    EXPECT_EQ(error_code_of([&] { sample_adjacency(l, -1.0, SampleMode::Soft, rng); }),
              ErrorCode::InvalidTemperature);
}

double keep_frequency(double p, std::size_t draws, double temperature) {
    // Every off-diagonal entry of each sample is an independent draw.
    const Eigen::Index n = 11;
    const std::size_t per_sample = static_cast<std::size_t>(n * (n - 1));
    const auto l = constant_logits(Matrix::Constant(n, n, logit(p)));
    std::size_t kept = 0, total = 0;
    for (std::uint64_t step = 0; total < draws; ++step) {
        RngStream rng{17, static_cast<std::uint64_t>(StreamPurpose::TrainGraph), step};
        const auto s = sample_adjacency(l, temperature, SampleMode::HardStraightThrough, rng);
        kept += static_cast<std::size_t>(s.value().sum());
        total += per_sample;
    }
    return static_cast<double>(kept) / static_cast<double>(total);
}

TEST(Sample, HardKeepFrequencyMatchesTheta) {
    EXPECT_NEAR(keep_frequency(0.5, 10000, 0.5), 0.5, 0.02);
    EXPECT_NEAR(keep_frequency(0.9, 10000, 0.5), 0.9, 0.02);
}

// Keep probability is theta for any temperature, within 4 binomial sigmas.
TEST(Sample, KeepFrequencyIndependentOfTemperature) {
    const std::size_t m = 20020;
    for (double p : {0.1, 0.3, 0.75}) {
        for (double s : {0.1, 1.0, 3.0}) {
            const double tol = 4.0 * std::sqrt(p * (1 - p) / static_cast<double>(m));
            EXPECT_NEAR(keep_frequency(p, m, s), p, tol) << "p=" << p << " s=" << s;
        }
    }
}

TEST(Sample, LowTemperatureApproachesIndicator) {
    RngStream rng{4, 4};
    Matrix logits(5, 5);
    for (Eigen::Index i = 0; i < logits.size(); ++i) logits.data()[i] = rng.normal();
    const Matrix noise = draw_gumbel_difference(5, rng);
    const auto s = sample_adjacency(constant_logits(logits), 1e-6, SampleMode::Soft, noise);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 5; ++j) {
            const double expect = i == j ? 0.0 : (logits(i, j) + noise(i, j) > 0 ? 1.0 : 0.0);
            EXPECT_NEAR(s.value()(i, j), expect, 1e-6);
        }
}

TEST(Sample, DeterministicModeIgnoresNoise) {
    const Matrix logits = Matrix::Constant(3, 3, 0.4);
    const auto s = sample_adjacency(constant_logits(logits), 0.5, SampleMode::Deterministic, Matrix());
    EXPECT_DOUBLE_EQ(s.value()(0, 1), stable_sigmoid(0.8));
    EXPECT_EQ(s.value()(1, 1), 0.0);
}

TEST(Sample, SameStreamSameSample) {
    RngStream a{5, 3, 9}, b{5, 3, 9};
    const auto l = constant_logits(Matrix::Constant(6, 6, 0.2));
    const auto sa = sample_adjacency(l, 0.5, SampleMode::Soft, a);
    const auto sb = sample_adjacency(l, 0.5, SampleMode::Soft, b);
    EXPECT_EQ(sa.value(), sb.value());
    EXPECT_EQ(sa.rng_state_id, sb.rng_state_id);
}

TEST(Sample, ReparameterizedGradientMatchesFiniteDifference) {
    RngStream rng{6, 6};
    Matrix logits(4, 4);
    for (Eigen::Index i = 0; i < logits.size(); ++i) logits.data()[i] = rng.normal();
    const Matrix noise = draw_gumbel_difference(4, rng);
    Matrix weights(4, 4);
    for (Eigen::Index i = 0; i < weights.size(); ++i) weights.data()[i] = rng.normal();
    ad::Parameter p("logits", logits);
    const auto s = sample_adjacency({ad::leaf(p)}, 0.7, SampleMode::Soft, noise);
    ad::backward(ad::sum(ad::mul(s.adjacency, ad::constant(weights))));
    const Matrix numeric = rgsl::testing::central_difference(
        [&] {
            return (sample_adjacency(constant_logits(p.value), 0.7, SampleMode::Soft, noise).value().array() *
                    weights.array())
                .sum();
        },
        p.value);
    EXPECT_LT(rgsl::testing::relative_error(p.grad, numeric), 1e-5);
}

TEST(Sample, StraightThroughGradientIsSoftGradient) {
    const Matrix logits = Matrix::Constant(3, 3, 0.3);
    RngStream rng{7, 7};
    const Matrix noise = draw_gumbel_difference(3, rng);
    ad::Parameter a("a", logits), b("b", logits);
    ad::backward(ad::sum(sample_adjacency({ad::leaf(a)}, 0.5, SampleMode::Soft, noise).adjacency));
    const auto hard = sample_adjacency({ad::leaf(b)}, 0.5, SampleMode::HardStraightThrough, noise);
    ad::backward(ad::sum(hard.adjacency));
    EXPECT_EQ(a.grad, b.grad);
    EXPECT_TRUE(((hard.value().array() == 0.0) || (hard.value().array() == 1.0)).all());
}

TEST(Density, Limits) {
    EXPECT_DOUBLE_EQ(expected_density(Matrix::Constant(4, 4, -1e6)), 0.0);
    EXPECT_NEAR(expected_density(Matrix::Constant(4, 4, logit(0.3))), 0.3, 1e-15);
}

}  // namespace
}  // namespace rgsl::rgg
