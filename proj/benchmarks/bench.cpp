#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "semchange/dynamics.hpp"
#include "semchange/regression.hpp"
#include "semchange/rng.hpp"
#include "semchange/second_order.hpp"
#include "semchange/synth.hpp"
#include "semchange/tiss.hpp"

using namespace semchange;

namespace {

Vocabulary bench_vocab(int n) {
    Vocabulary vocab;
    for (int i = 0; i < n; ++i) {
        std::string num = std::to_string(i);
        vocab.words.push_back("w" + std::string(4 - num.size(), '0') + num);
    }
    for (int i = 0; i < n; ++i) vocab.index[vocab.words[i]] = i;
    vocab.counts.assign(static_cast<std::size_t>(n), {1});
    return vocab;
}

EpochEmbedding bench_embedding(int n, int dim, std::uint64_t seed) {
    EpochEmbedding emb;
    emb.epoch = EpochId{0};
    emb.dim = dim;
    emb.matrix.resize(n, dim);
    GaussianStream g(seed);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j) emb.matrix(i, j) = g.next();
    return emb;
}

void BM_Ols(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int k = 10;
    GaussianStream g(1);
    Eigen::MatrixXd X(m, k);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < k; ++j) X(i, j) = g.next();
        y[i] = g.next();
    }
    for (auto _ : state) benchmark::DoNotOptimize(ols(X, y, true));
}
BENCHMARK(BM_Ols)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SecondOrder(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Vocabulary vocab = bench_vocab(n);
    const EpochEmbedding emb = bench_embedding(n, 100, 2);
    for (auto _ : state) benchmark::DoNotOptimize(second_order_matrix(emb, vocab));
}
BENCHMARK(BM_SecondOrder)->Arg(200)->Arg(500)->Arg(1000);

void BM_TissGraphs(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Vocabulary vocab = bench_vocab(n);
    std::vector<SecondOrderMatrix> sos;
    for (int t = 0; t < 10; ++t)
        sos.push_back(second_order_matrix(bench_embedding(n, 50, 10 + t), vocab));
    for (auto _ : state) benchmark::DoNotOptimize(all_tiss_graphs(sos, vocab));
}
BENCHMARK(BM_TissGraphs)->Arg(200)->Arg(500);

void BM_FitDynamics(benchmark::State& state) {
    VarSpec spec;
    spec.epochs = 11;
    spec.words = static_cast<int>(state.range(0));
    spec.neighbors = 5;
    spec.order = 1;
    spec.coefficients.resize(5, 1);
    spec.coefficients << 0.3, 0.25, 0.2, 0.15, 0.05;
    spec.noise_sigma = 0.01;
    spec.seed = 3;
    const VarData data = gen_var_embeddings(spec);
    for (auto _ : state)
        for (int w = 0; w < spec.words; ++w)
            benchmark::DoNotOptimize(fit_dynamics(data.series, w, 1, spec.epochs));
}
BENCHMARK(BM_FitDynamics)->Arg(50)->Arg(200);

void BM_DecayGeneration(benchmark::State& state) {
    DecaySpec spec;
    spec.epochs = 20;
    spec.words = static_cast<int>(state.range(0));
    spec.slope = -0.004;
    spec.noise_sigma = 0.01;
    spec.seed = 4;
    for (auto _ : state) benchmark::DoNotOptimize(gen_decay_graphs(spec));
}
BENCHMARK(BM_DecayGeneration)->Arg(500)->Arg(2000);

} // namespace

BENCHMARK_MAIN();
