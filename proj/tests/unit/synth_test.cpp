#include <gtest/gtest.h>

#include <cmath>

#include "rgsl/data/synth.hpp"

namespace rgsl::data {
namespace {

TEST(Synth, DecoupledDecay) {
    ExplicitGraph zero{Matrix::Zero(3, 3), true, ""};
    const auto d = synth_dataset(3, zero, 10, 0.0, 1, std::vector<double>(3, 1.0));
    for (std::size_t t = 0; t < 10; ++t)
        for (std::size_t n = 0; n < 3; ++n) EXPECT_DOUBLE_EQ(d.series.at(t, n, 0), std::pow(0.5, t));
}

TEST(Synth, DeterministicForSeed) {
    const auto g = ring_graph(5);
    const auto a = synth_dataset(5, g, 50, 0.1, 9);
    const auto b = synth_dataset(5, g, 50, 0.1, 9);
    const auto c = synth_dataset(5, g, 50, 0.1, 10);
    EXPECT_EQ(a.series.values(), b.series.values());
    EXPECT_NE(a.series.values(), c.series.values());
}

TEST(Synth, RingGraph) {
    const auto g = ring_graph(4);
    const Matrix expect = (Matrix(4, 4) << 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0).finished();
    EXPECT_EQ(g.adjacency, expect);
}

// Correlation of x_i(t) with x_j(t+1), computed directly from the series.
double lag_correlation(const SeriesTensor& s, std::size_t i, std::size_t j) {
    const std::size_t len = s.timestamps() - 1;
    double mi = 0, mj = 0;
    for (std::size_t t = 0; t < len; ++t) {
        mi += s.at(t, i, 0);
        mj += s.at(t + 1, j, 0);
    }
    mi /= static_cast<double>(len);
    mj /= static_cast<double>(len);
    double cov = 0, vi = 0, vj = 0;
    for (std::size_t t = 0; t < len; ++t) {
        const double a = s.at(t, i, 0) - mi, b = s.at(t + 1, j, 0) - mj;
        cov += a * b;
        vi += a * a;
        vj += b * b;
    }
    return cov / std::sqrt(vi * vj);
}

TEST(Synth, RingNeighboursCorrelateMoreAtLagOne) {
    const std::size_t n = 8;
    const auto d = synth_dataset(n, ring_graph(n), 2000, 0.1, 7);
    double adjacent = 0, distant = 0;
    int n_adj = 0, n_far = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double c = lag_correlation(d.series, i, j);
            if (d.true_graph.adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0) {
                adjacent += c;
                ++n_adj;
            } else {
                distant += c;
                ++n_far;
            }
        }
    EXPECT_GT(adjacent / n_adj, distant / n_far + 0.05);
}

}  // namespace
}  // namespace rgsl::data
