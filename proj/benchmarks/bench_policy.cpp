#include <benchmark/benchmark.h>

#include <random>

#include "ocl/policy/policies.hpp"
#include "ocl/policy/select.hpp"

using namespace ocl;

namespace {

model::SimilarityGraph bench_graph(int N) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) W(i, j) = W(j, i) = unif(rng);
    return model::SimilarityGraph(W);
}

} // namespace

static void BM_clucb_score_all(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    auto graph = bench_graph(N);
    policy::ClUcbOptions opt;
    policy::ClUcbPolicy pol("cl_ucb", graph, {N, 3, 3}, 0.3, 0.3, 0.01, opt, 5);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(3, N);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pol.score_all(X));
    }
}
BENCHMARK(BM_clucb_score_all)->Arg(50)->Arg(100);

static void BM_goblin_cycle(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    auto graph = bench_graph(N);
    policy::GobLinPolicy pol("gob_lin", graph, {N, 3, 3}, 0.3, 0.1, 1.0);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(3, N);
    model::CycleObservation obs;
    obs.cycle = 0;
    obs.X = X;
    obs.y = Eigen::VectorXd::Random(N);
    obs.mask.assign(static_cast<size_t>(N), 0);
    for (int i = 0; i < N / 3; ++i) obs.mask[static_cast<size_t>(i)] = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pol.score_all(X));
        pol.update(obs);
    }
}
BENCHMARK(BM_goblin_cycle)->Arg(50)->Arg(100);

static void BM_select_top_m(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    Eigen::VectorXd scores = Eigen::VectorXd::Random(N);
    for (auto _ : state) {
        benchmark::DoNotOptimize(policy::select_top_m(scores, N / 3));
    }
}
BENCHMARK(BM_select_top_m)->Arg(50)->Arg(1000);
