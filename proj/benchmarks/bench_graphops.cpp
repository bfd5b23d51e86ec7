#include <benchmark/benchmark.h>

#include "rgsl/autodiff/ops.hpp"
#include "rgsl/graphops/graphops.hpp"
#include "rgsl/rgg/rgg.hpp"

namespace {

using namespace rgsl;

Matrix random_matrix(Eigen::Index r, Eigen::Index c, RngStream& rng) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

// args: nodes, batch
void BM_GraphTransform(benchmark::State& state) {
    const auto n = state.range(0), b = state.range(1);
    RngStream rng{1, 1};
    const Matrix a = random_matrix(n, n, rng).cwiseAbs();
    auto prop = graphops::normalize_adjacency(a, graphops::GraphSource::Explicit);
    auto params = graphops::BranchParams::init(65, 64, rng, "bench");
    const auto x = ad::constant(random_matrix(n * b, 65, rng));
    ad::NoGradGuard guard;
    for (auto _ : state) benchmark::DoNotOptimize(graphops::graph_transform(prop, x, params, b).value().data());
}
BENCHMARK(BM_GraphTransform)->Args({50, 64})->Args({307, 64})->Unit(benchmark::kMillisecond);

void BM_GraphTransformBackward(benchmark::State& state) {
    const auto n = state.range(0), b = state.range(1);
    RngStream rng{1, 1};
    const Matrix a = random_matrix(n, n, rng).cwiseAbs();
    auto params = graphops::BranchParams::init(65, 64, rng, "bench");
    ad::Parameter adjacency("adjacency", a);
    const Matrix x = random_matrix(n * b, 65, rng);
    for (auto _ : state) {
        auto prop = graphops::normalize_adjacency(ad::leaf(adjacency), graphops::GraphSource::Learned);
        ad::backward(ad::sum(graphops::graph_transform(prop, ad::constant(x), params, b)));
    }
}
BENCHMARK(BM_GraphTransformBackward)->Args({50, 64})->Args({307, 64})->Unit(benchmark::kMillisecond);

void BM_SampleAdjacency(benchmark::State& state) {
    const auto n = state.range(0);
    RngStream rng{1, 1};
    const rgg::EdgeLogitMatrix logits{ad::constant(random_matrix(n, n, rng))};
    ad::NoGradGuard guard;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rgg::sample_adjacency(logits, 0.5, rgg::SampleMode::Soft, rng).value().data());
    }
}
BENCHMARK(BM_SampleAdjacency)->Arg(50)->Arg(307)->Unit(benchmark::kMicrosecond);

}  // namespace
