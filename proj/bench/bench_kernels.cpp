// Serial vs OpenMP kernel comparison. Run with --benchmark_filter=... to
// narrow; thread counts sweep via the /threads argument.

#include <benchmark/benchmark.h>

#include <random>

#include "entrex/features/features.hpp"
#include "entrex/index/tokenizer.hpp"
#include "entrex/kernels/kernels.hpp"
#include "entrex/lsh/minhash.hpp"

namespace {

using entrex::kernels::SparsePoint;

std::vector<SparsePoint> random_points(size_t n, size_t dim, size_t nnz, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SparsePoint> points(n);
    for (auto& p : points) {
        std::vector<int32_t> idx;
        for (size_t j = 0; j < nnz; ++j) idx.push_back(static_cast<int32_t>(rng() % dim));
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        for (const auto i : idx)
            p.entries.emplace_back(i, static_cast<double>(rng() % 1000) / 100.0 + 0.01);
    }
    return points;
}

std::vector<entrex::features::FeatureVector> random_vectors(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<entrex::features::FeatureVector> out(n);
    for (size_t i = 0; i < n; ++i) {
        out[i].uri = "urn:bench:e" + std::to_string(i);
        for (int f = 0; f < 60; ++f)
            out[i].entries.emplace_back("U:tok" + std::to_string(rng() % 4000), 1.0);
        std::sort(out[i].entries.begin(), out[i].entries.end());
        out[i].entries.erase(std::unique(out[i].entries.begin(), out[i].entries.end()),
                             out[i].entries.end());
    }
    return out;
}

void pairwise_serial(benchmark::State& state) {
    const auto points = random_points(static_cast<size_t>(state.range(0)), 4096, 64, 1);
    for (auto _ : state) {
        auto d = entrex::kernels::pairwise_distances_serial(points);
        benchmark::DoNotOptimize(d);
    }
}

void pairwise_parallel(benchmark::State& state) {
    const auto points = random_points(static_cast<size_t>(state.range(0)), 4096, 64, 1);
    entrex::kernels::set_max_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        auto d = entrex::kernels::pairwise_distances(points);
        benchmark::DoNotOptimize(d);
    }
    entrex::kernels::set_max_threads(0);
}

void assign_serial(benchmark::State& state) {
    const auto n = static_cast<size_t>(state.range(0));
    const auto points = random_points(n, 512, 32, 2);
    constexpr size_t kK = 16;
    std::vector<double> centroids(kK * 512, 0.5);
    std::vector<int> assign;
    std::vector<double> dist2;
    for (auto _ : state) {
        entrex::kernels::assign_points_serial(points, centroids, kK, 512, assign, dist2);
        benchmark::DoNotOptimize(assign);
    }
}

void assign_parallel(benchmark::State& state) {
    const auto n = static_cast<size_t>(state.range(0));
    const auto points = random_points(n, 512, 32, 2);
    constexpr size_t kK = 16;
    std::vector<double> centroids(kK * 512, 0.5);
    std::vector<int> assign;
    std::vector<double> dist2;
    entrex::kernels::set_max_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        entrex::kernels::assign_points(points, centroids, kK, 512, assign, dist2);
        benchmark::DoNotOptimize(assign);
    }
    entrex::kernels::set_max_threads(0);
}

void minhash_serial(benchmark::State& state) {
    const auto vectors = random_vectors(static_cast<size_t>(state.range(0)), 3);
    entrex::lsh::LshParams params;
    for (auto _ : state) {
        auto sigs = entrex::lsh::signatures_serial(vectors, params);
        benchmark::DoNotOptimize(sigs);
    }
}

void minhash_parallel(benchmark::State& state) {
    const auto vectors = random_vectors(static_cast<size_t>(state.range(0)), 3);
    entrex::lsh::LshParams params;
    entrex::kernels::set_max_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        auto sigs = entrex::lsh::signatures(vectors, params);
        benchmark::DoNotOptimize(sigs);
    }
    entrex::kernels::set_max_threads(0);
}

}  // namespace

BENCHMARK(pairwise_serial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(pairwise_parallel)
    ->Args({256, 2})
    ->Args({256, 4})
    ->Args({512, 2})
    ->Args({512, 4})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(assign_serial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(assign_parallel)->Args({2000, 2})->Args({2000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(minhash_serial)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(minhash_parallel)->Args({512, 2})->Args({512, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
