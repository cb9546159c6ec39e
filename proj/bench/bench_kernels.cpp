// Compares the OpenMP gate kernels against the serial reference and times a
// full Trotter step. Run: ./bench/bench_kernels [--benchmark_filter=...]
#include <benchmark/benchmark.h>

#include <random>

#include "trotter/formulas.hpp"
#include "trotter/kernels.hpp"

using namespace trotter;

namespace {

Vec random_amps(int L, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec v(Eigen::Index(1) << L);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cxd(normal(rng), normal(rng));
    v /= v.norm();
    return v;
}

Mat bond_gate() {
    const auto ham = build_heisenberg(2, 0.5);
    return hermitian_exponential(ham.odd_terms[0].matrix, 0.005);
}

void bm_apply_two_site_parallel(benchmark::State& state) {
    const int L = int(state.range(0));
    Vec amps = random_amps(L, 1);
    const Mat gate = bond_gate();
    const std::vector<int> sites = {L / 2, L / 2 + 1};
    for (auto _ : state) {
        kernels::apply_local(amps, L, sites, gate);
        benchmark::DoNotOptimize(amps.data());
    }
    state.SetItemsProcessed(state.iterations() * (Eigen::Index(1) << L));
}

void bm_apply_two_site_serial(benchmark::State& state) {
    const int L = int(state.range(0));
    Vec amps = random_amps(L, 1);
    const Mat gate = bond_gate();
    const std::vector<int> sites = {L / 2, L / 2 + 1};
    for (auto _ : state) {
        kernels::serial::apply_local(amps, L, sites, gate);
        benchmark::DoNotOptimize(amps.data());
    }
    state.SetItemsProcessed(state.iterations() * (Eigen::Index(1) << L));
}

void bm_trotter_step(benchmark::State& state) {
    const int L = int(state.range(0));
    const auto ham = build_heisenberg(L, 0.5);
    const TrotterPropagator prop(ham, suzuki_schedule(1), 0.01);
    Vec amps = random_amps(L, 2);
    for (auto _ : state) {
        prop.step(amps);
        benchmark::DoNotOptimize(amps.data());
    }
    state.SetItemsProcessed(state.iterations() * (Eigen::Index(1) << L));
}

}  // namespace

BENCHMARK(bm_apply_two_site_serial)->Arg(8)->Arg(12)->Arg(14)->Arg(16);
BENCHMARK(bm_apply_two_site_parallel)->Arg(8)->Arg(12)->Arg(14)->Arg(16);
BENCHMARK(bm_trotter_step)->Arg(8)->Arg(12)->Arg(14);

BENCHMARK_MAIN();
