#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "expect_error.hpp"
#include "rgsl/types.hpp"

namespace rgsl {
namespace {

using testing::error_code_of;

SeriesTensor iota_series(std::size_t t, std::size_t n, std::size_t f) {
    std::vector<double> v(t * n * f);
    std::iota(v.begin(), v.end(), 0.0);
    return SeriesTensor(t, n, f, v);
}

TEST(SeriesTensor, IndexingIsTimeNodeFeature) {
    const auto s = iota_series(3, 4, 2);
    EXPECT_EQ(s.at(0, 0, 1), 1.0);
    EXPECT_EQ(s.at(0, 1, 0), 2.0);
    EXPECT_EQ(s.at(1, 0, 0), 8.0);
    EXPECT_EQ(s.at(2, 3, 1), 23.0);
}

TEST(SeriesTensor, SliceAndFirstNodes) {
    const auto s = iota_series(5, 4, 2);
    const auto sl = s.slice_time(1, 3);
    EXPECT_EQ(sl.timestamps(), 2u);
    EXPECT_EQ(sl.at(0, 2, 1), s.at(1, 2, 1));
    const auto head = s.first_nodes(2);
    EXPECT_EQ(head.nodes(), 2u);
    EXPECT_EQ(head.at(4, 1, 0), s.at(4, 1, 0));
}

TEST(SeriesTensor, ValidateRejectsBadInvariants) {
    EXPECT_EQ(error_code_of([] { SeriesTensor(2, 1, 1, {1.0, 2.0}).validate(); }), ErrorCode::BadShape);
    EXPECT_EQ(error_code_of([] { SeriesTensor(1, 2, 1, {1.0, std::nan("")}).validate(); }),
              ErrorCode::BadFormat);
    EXPECT_NO_THROW(iota_series(2, 2, 1).validate());
}

TEST(ExplicitGraph, Validate) {
    ExplicitGraph g{Matrix::Zero(2, 3), false, ""};
    EXPECT_EQ(error_code_of([&] { g.validate(); }), ErrorCode::NonSquare);
    g.adjacency = (Matrix(2, 2) << 0, -1, 1, 0).finished();
    EXPECT_EQ(error_code_of([&] { g.validate(); }), ErrorCode::NegativeEntry);
    g.adjacency = (Matrix(2, 2) << 1, 1, 1, 0).finished();
    EXPECT_EQ(error_code_of([&] { g.validate(); }), ErrorCode::BadFormat);
    g.adjacency = (Matrix(2, 2) << 0, 1, 1, 0).finished();
    EXPECT_NO_THROW(g.validate());
    EXPECT_TRUE(g.is_symmetric());
}

TEST(NodeEmbeddingTable, RejectsNonFinite) {
    NodeEmbeddingTable e{ad::Parameter("E", Matrix::Zero(3, 2))};
    EXPECT_NO_THROW(e.validate());
    e.embeddings.value(1, 1) = std::numeric_limits<double>::infinity();
    EXPECT_EQ(error_code_of([&] { e.validate(); }), ErrorCode::NonFiniteEmbedding);
}

}  // namespace
}  // namespace rgsl
