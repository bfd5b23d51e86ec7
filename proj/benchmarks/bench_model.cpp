#include <benchmark/benchmark.h>

#include <numeric>

#include "rgsl/autodiff/ops.hpp"
#include "rgsl/data/scaler.hpp"
#include "rgsl/data/synth.hpp"
#include "rgsl/strgc/model.hpp"
#include "rgsl/train/trainer.hpp"

namespace {

using namespace rgsl;

struct Fixture {
    RGSLConfig cfg;
    ExplicitGraph graph;
    data::WindowSet windows;
    ScalerStats scaler;
    std::vector<std::size_t> indices;

    explicit Fixture(std::size_t nodes) {
        cfg.n_nodes = static_cast<std::int64_t>(nodes);
        std::vector<double> values;
        RngStream rng{7, 5};
        const std::size_t t = 200;
        for (std::size_t i = 0; i < t * nodes; ++i) values.push_back(100.0 + 10.0 * rng.normal());
        const SeriesTensor series(t, nodes, 1, std::move(values));
        graph = data::ring_graph(nodes);
        scaler = data::fit_scaler(series, 0, t);
        windows = data::make_windows(series, scaler, 12, 12, data::TimeRange{0, t});
        indices.resize(static_cast<std::size_t>(cfg.batch_size));
        std::iota(indices.begin(), indices.end(), 0);
    }
};

// arg: nodes
void BM_ModelForward(benchmark::State& state) {
    Fixture f(static_cast<std::size_t>(state.range(0)));
    strgc::RGSLModel model(f.cfg, f.graph, f.scaler);
    const auto batch = data::make_batch(f.windows, f.indices);
    RngStream rng{3, 4};
    ad::NoGradGuard guard;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.forward(batch, {rgg::SampleMode::Soft, nullptr, &rng, std::nullopt}).prediction);
    }
}
BENCHMARK(BM_ModelForward)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
    Fixture f(static_cast<std::size_t>(state.range(0)));
    strgc::RGSLModel model(f.cfg, f.graph, f.scaler);
    train::Adam adam(model.parameters(), f.cfg.learning_rate, f.cfg.grad_clip);
    const auto batch = data::make_batch(f.windows, f.indices);
    RngStream rng{3, 3};
    for (auto _ : state) {
        model.zero_grad();
        ad::backward(train::batch_loss(model, batch, {rgg::SampleMode::Soft, nullptr, &rng, std::nullopt}));
        adam.step();
    }
}
BENCHMARK(BM_TrainStep)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
