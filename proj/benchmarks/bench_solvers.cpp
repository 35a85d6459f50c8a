#include <benchmark/benchmark.h>

#include "glab/estimation.hpp"
#include "glab/geometry.hpp"
#include "glab/rng.hpp"
#include "glab/solvers.hpp"

using namespace glab;

namespace {

// Unit-rate configuration around the origin with exactly n atoms in [-r, r]².
PointConfiguration with_atoms(std::size_t n, double r) {
    for (std::uint64_t s = 0;; ++s) {
        auto cfg = sample_ppp(IntensityDescriptor::dirac(2, 1.0, static_cast<double>(n) / (4.0 * r * r)),
                              Box::cube(2, -r, r), derive_seed(77, {n, s}));
        if (cfg.size() == n) return cfg;
    }
}

}  // namespace

static void BM_SamplePpp(benchmark::State& state) {
    const auto nu = IntensityDescriptor::exponential(2, 1.0);
    const Box window = Box::cube(2, 0.0, static_cast<double>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_ppp(nu, window, seed++));
}
BENCHMARK(BM_SamplePpp)->Arg(10)->Arg(30)->Arg(100);

static void BM_PathExact(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto cfg = with_atoms(n, 1.0);
    const Point x = Point::Zero(2);
    for (auto _ : state) benchmark::DoNotOptimize(solve_path_exact(cfg, x, std::nullopt, 10.0, 16));
}
BENCHMARK(BM_PathExact)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

static void BM_RestrictedExact(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto cfg = with_atoms(n, 1.0);
    const Point x = Point::Zero(2);
    for (auto _ : state) benchmark::DoNotOptimize(solve_restricted_animal_exact(cfg, x, std::nullopt, 3.0, 14));
}
BENCHMARK(BM_RestrictedExact)->DenseRange(8, 14, 3)->Unit(benchmark::kMillisecond);

static void BM_Bracket(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto cfg = with_atoms(n, 1.0);
    const Query q{Model::animal_penalized, Point::Zero(2), std::nullopt, 3.0, 0.5};
    for (auto _ : state) benchmark::DoNotOptimize(solve_animal_bracket(cfg, q));
}
BENCHMARK(BM_Bracket)->DenseRange(8, 14, 3)->Unit(benchmark::kMillisecond);

static void BM_HeuristicPath(benchmark::State& state) {
    const double L = static_cast<double>(state.range(0));
    const auto cfg = sample_ppp(IntensityDescriptor::dirac(2, 1.0, 1.0), curve_window(2, 0.5, L), 5);
    Point y = Point::Zero(2);
    y[0] = 0.5 * L;
    const Query q{Model::path, Point::Zero(2), y, L, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(solve_heuristic(cfg, q, 64, 1));
}
BENCHMARK(BM_HeuristicPath)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_HeuristicAnimal(benchmark::State& state) {
    const double L = static_cast<double>(state.range(0));
    const auto cfg = sample_ppp(IntensityDescriptor::dirac(2, 1.0, 1.0), curve_window(2, 0.5, L), 5);
    Point y = Point::Zero(2);
    y[0] = 0.5 * L;
    const Query q{Model::animal_restricted, Point::Zero(2), y, L, kInfinity};
    for (auto _ : state) benchmark::DoNotOptimize(solve_heuristic(cfg, q, 64, 1));
}
BENCHMARK(BM_HeuristicAnimal)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Mst(benchmark::State& state) {
    const auto cfg = with_atoms(static_cast<std::size_t>(state.range(0)), 5.0);
    std::vector<Point> pts;
    for (const auto& p : cfg.points) pts.push_back(p.pos);
    for (auto _ : state) benchmark::DoNotOptimize(euclidean_mst(pts).length);
}
BENCHMARK(BM_Mst)->Arg(16)->Arg(128)->Arg(1024);
BENCHMARK_MAIN();
