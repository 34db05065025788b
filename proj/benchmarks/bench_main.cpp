#include <benchmark/benchmark.h>

#include "fibercap/constellation.hpp"
#include "fibercap/coupling.hpp"
#include "fibercap/mutual_info.hpp"
#include "fibercap/perturbative.hpp"
#include "fibercap/rng.hpp"
#include "fibercap/ssfm.hpp"

using namespace fibercap;

namespace {

const SystemConfig& long_link() {
    static const SystemConfig c = make_config(reference_link(10, 2e-16));
    return c;
}

void BM_TensorFill(benchmark::State& st) {
    const int M = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(integrate_tensor(long_link(), M, 32).C(M, M));
    st.counters["entries"] = double((2 * M + 1) * (2 * M + 1));
}
BENCHMARK(BM_TensorFill)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FrequencyLattice(benchmark::State& st) {
    const FrequencyDomainCoupling f(long_link());
    for (auto _ : st) benchmark::DoNotOptimize(f(1, 2, 2.0));
}
BENCHMARK(BM_FrequencyLattice)->Unit(benchmark::kMillisecond);

void BM_SsfmSpan(benchmark::State& st) {
    const SystemConfig c = make_config(reference_link(1, 2e-16));
    const std::size_t d = static_cast<std::size_t>(st.range(0));
    const TimeGrid g = make_grid(c, d);
    const Field in = launch(c, g, sample_block(Constellation::gaussian_iid(1e-3), d, 1));
    PropagationStats ps;
    for (auto _ : st) benchmark::DoNotOptimize(propagate(c, in, 2, {}, &ps).samples.data());
    st.counters["grid"] = double(g.n);
    st.counters["steps"] = double(ps.steps);
}
BENCHMARK(BM_SsfmSpan)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Recurrence(benchmark::State& st) {
    const CouplingTensor t = integrate_tensor(long_link(), static_cast<int>(st.range(0)), 32);
    Engine e = make_engine(3);
    CVector x(1024);
    for (auto& v : x) v = complex_normal(e);
    const int order = static_cast<int>(st.range(1));
    for (auto _ : st) benchmark::DoNotOptimize(deterministic_orders(t, x, order).back()[0]);
}
BENCHMARK(BM_Recurrence)->Args({16, 1})->Args({64, 1})->Args({64, 2})->Unit(benchmark::kMillisecond);

void BM_MutualInfo(benchmark::State& st) {
    const RippleDistribution d{{0.4, 0.4, 0.2}, {0.2, 0.3, 0.4}, {0.5, 2.0, 3.5}};
    const NoiseLaw law{5.6e-3, 0.3, Surrogate::level_spread};
    for (auto _ : st) benchmark::DoNotOptimize(mi_estimate(d, law, 4000, 1).bits);
    st.SetItemsProcessed(st.iterations() * 4000);
}
BENCHMARK(BM_MutualInfo)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
