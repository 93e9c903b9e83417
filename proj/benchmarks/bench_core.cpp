#include <benchmark/benchmark.h>

#include <vector>

#include "permlat/bounds.hpp"
#include "permlat/kernels.hpp"
#include "permlat/lattice.hpp"
#include "permlat/oracle.hpp"

using namespace permlat;

namespace {

SpaceParams korobov() { return {1.0, 1.0, 1.0, DecayProfile::korobov()}; }
SpaceParams mixed() { return {1.5, 1.0, 1.0, DecayProfile::mixed_smoothness()}; }

}  // namespace

static void BM_Kernel1Closed(benchmark::State& state) {
    kernels::Kernel1 k(korobov());
    double u = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(k.value(u));
        u += 0.0137;
    }
}
BENCHMARK(BM_Kernel1Closed);

static void BM_Kernel1Series(benchmark::State& state) {
    kernels::Kernel1 k(mixed(), state.range(0));
    double u = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(k.value(u));
        u += 0.0137;
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Kernel1Series)->Range(1 << 8, 1 << 14)->Complexity(benchmark::oN);

static void BM_KernelInvariant(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    auto inv = InvarianceSpec::full(d);
    Point x(static_cast<std::size_t>(d)), y(static_cast<std::size_t>(d));
    for (int l = 0; l < d; ++l) {
        x[static_cast<std::size_t>(l)] = 0.1 + 0.07 * l;
        y[static_cast<std::size_t>(l)] = 0.9 - 0.05 * l;
    }
    for (auto _ : state) benchmark::DoNotOptimize(kernels::kernel_invariant(korobov(), inv, x, y));
}
BENCHMARK(BM_KernelInvariant)->DenseRange(1, 6);

// Engine construction: residue-class sums and their cosine spectra.
static void BM_EngineSetup(benchmark::State& state) {
    const long long n = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            lattice::LatticeErrors(korobov(), InvarianceSpec::full(3), n, Truncation{}));
    state.SetComplexityN(n);
}
BENCHMARK(BM_EngineSetup)->Arg(101)->Arg(401)->Arg(1009)->Arg(4001)->Complexity();

static void BM_WcePerZ(benchmark::State& state) {
    const long long n = state.range(0);
    const lattice::LatticeErrors eng(korobov(), InvarianceSpec::full(3), n, Truncation{});
    std::vector<long long> z = {1, n / 3, n / 2};
    for (auto _ : state) benchmark::DoNotOptimize(eng.wce_unshifted_sq(z));
}
BENCHMARK(BM_WcePerZ)->Arg(101)->Arg(401)->Arg(1009);

static void BM_RmsPerZ(benchmark::State& state) {
    const long long n = state.range(0);
    const lattice::LatticeErrors eng(korobov(), InvarianceSpec::full(3), n, Truncation{});
    std::vector<long long> z = {1, n / 3, n / 2};
    for (auto _ : state) benchmark::DoNotOptimize(eng.rms_shifted_sq(z));
}
BENCHMARK(BM_RmsPerZ)->Arg(101)->Arg(401)->Arg(1009);

static void BM_OracleQuadraticForm(benchmark::State& state) {
    const long long n = state.range(0);
    lattice::Lattice lat(n, {1, 5});
    std::vector<Point> nodes;
    for (long long j = 0; j < n; ++j) nodes.push_back(lat.point(j));
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::wce_quadratic_form(korobov(), InvarianceSpec::full(2),
                                                            nodes, {}, Truncation{}));
    state.SetComplexityN(n);
}
BENCHMARK(BM_OracleQuadraticForm)->Arg(11)->Arg(31)->Arg(101)->Complexity(benchmark::oNSquared);

static void BM_SearchExhaustive(benchmark::State& state) {
    const long long n = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(lattice::search(korobov(), InvarianceSpec::full(2), n,
                                                 lattice::Objective::RmsShifted,
                                                 lattice::SearchMode::exhaustive(), Truncation{}));
}
BENCHMARK(BM_SearchExhaustive)->Arg(31)->Arg(61)->Arg(101);

BENCHMARK_MAIN();
