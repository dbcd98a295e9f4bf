#include <benchmark/benchmark.h>

#include <random>

#include "ocl/model/als.hpp"
#include "ocl/model/kmeans.hpp"
#include "ocl/model/transforms.hpp"

using namespace ocl::model;

namespace {

struct Setup {
    SimilarityGraph graph;
    Regularizer reg;
    Dims dims;
    CycleObservation obs;
};

Setup make_setup(int N, int K, int p, int M) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) W(i, j) = W(j, i) = unif(rng);
    SimilarityGraph graph(W);
    Regularizer reg(0.3, 0.3, 0.01, graph, K);
    CycleObservation obs;
    obs.cycle = 0;
    obs.X.resize(p, N);
    obs.y.resize(N);
    obs.mask.assign(static_cast<size_t>(N), 0);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < p; ++j) obs.X(j, i) = nd(rng);
        obs.y(i) = nd(rng);
        if (i < M) obs.mask[static_cast<size_t>(i)] = 1;
    }
    return {std::move(graph), std::move(reg), Dims{N, K, p}, std::move(obs)};
}

} // namespace

static void BM_als_cycle(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    auto setup = make_setup(N, 3, 3, N / 3);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    SufficientStats stats(setup.reg, setup.dims);
    stats.set_snapshot(
        Eigen::VectorXd::NullaryExpr(9, [&](Eigen::Index) { return nd(rng); }),
        Eigen::VectorXd::NullaryExpr(N * 3, [&](Eigen::Index) { return nd(rng); }));
    AlsOptions opt;
    for (auto _ : state) {
        als_fit(stats, setup.reg, setup.obs, opt);
        benchmark::DoNotOptimize(stats.q_hat());
    }
}
BENCHMARK(BM_als_cycle)->Arg(50)->Arg(100);

static void BM_membership_solve(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    auto setup = make_setup(N, 3, 3, N / 3);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    SufficientStats stats(setup.reg, setup.dims);
    stats.set_snapshot(
        Eigen::VectorXd::NullaryExpr(9, [&](Eigen::Index) { return nd(rng); }),
        Eigen::VectorXd::NullaryExpr(N * 3, [&](Eigen::Index) { return nd(rng); }));
    for (int r = 0; r < 200; ++r) {
        const int unit = r % N;
        stats.accumulate(setup.reg, 0, unit, setup.obs.X.col(unit), setup.obs.y(unit));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_membership_tilde(stats));
    }
}
BENCHMARK(BM_membership_solve)->Arg(50)->Arg(100);

static void BM_kmeans_init(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    auto setup = make_setup(N, 3, 3, N / 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kmeans_rows(setup.graph.similarity(), 3, 7));
    }
}
BENCHMARK(BM_kmeans_init)->Arg(50)->Arg(100);
