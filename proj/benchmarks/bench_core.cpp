#include <benchmark/benchmark.h>

#include "magalg/extremal.hpp"
#include "magalg/random.hpp"

using namespace magalg;

namespace {

void BM_EigTraceless(benchmark::State& state) {
    Rng rng(1);
    std::vector<TracelessSymMat3> ms;
    for (int i = 0; i < 1024; ++i)
        ms.push_back(TracelessSymMat3::project(
            SymMat3{rng.normal(), rng.normal(), rng.normal(), rng.normal(), rng.normal(), rng.normal()}));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eig_traceless(ms[i++ & 1023]));
    }
}
BENCHMARK(BM_EigTraceless);

void BM_BuildAlgebra(benchmark::State& state) {
    Rng rng(2);
    const DipoleConfig cfg = random_config(rng, int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_algebra(cfg));
}
BENCHMARK(BM_BuildAlgebra)->Arg(1)->Arg(8)->Arg(64);

void BM_BruteForce(benchmark::State& state) {
    Rng rng(3);
    const MagneticAlgebra alg = build_algebra(random_config(rng, 4));
    SamplingOptions o;
    o.n_samples = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lambda_bar_bruteforce(alg, o));
}
BENCHMARK(BM_BruteForce)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_BoundsReport(benchmark::State& state) {
    Rng rng(4);
    const PlanarSample s = random_planar_config(rng);
    const MagneticAlgebra alg = build_algebra(s.config);
    const PlanarStructure p = planar_structure(alg, s.normal);
    for (auto _ : state) benchmark::DoNotOptimize(bounds_report(alg, p));
}
BENCHMARK(BM_BoundsReport)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
