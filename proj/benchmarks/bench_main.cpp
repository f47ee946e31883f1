#include <benchmark/benchmark.h>

#include "hetero/lowerbound.hpp"
#include "hetero/numerics.hpp"
#include "hetero/sim_model.hpp"
#include "hetero/statistics.hpp"
#include "hetero/testing.hpp"

using namespace hetero;

namespace {

std::vector<double> null_sample(int n) {
    RegressionModel m;
    m.n = n;
    return sample(m, 1).y;
}

void BM_THatKernel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StatisticConfig c;
    c.C_h = 8.0;
    const StatisticEvaluator ev(c, n);
    const auto y = null_sample(n);
    for (auto _ : state) benchmark::DoNotOptimize(ev.value(y));
    state.SetComplexityN(n);
}
BENCHMARK(BM_THatKernel)->RangeMultiplier(2)->Range(256, 8192)->Complexity();

void BM_SHat(benchmark::State& state) {
    const auto y = null_sample(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(s_hat(y).value);
}
BENCHMARK(BM_SHat)->RangeMultiplier(4)->Range(256, 16384);

void BM_Dette2002(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto y = null_sample(n);
    const double h = std::pow(n, -1.0 / 1.8);
    for (auto _ : state) benchmark::DoNotOptimize(dette_2002_stat(y, BaseKernel::box(), h));
}
BENCHMARK(BM_Dette2002)->RangeMultiplier(4)->Range(256, 16384);

void BM_Sample(benchmark::State& state) {
    RegressionModel m;
    m.n = static_cast<int>(state.range(0));
    m.V = FunctionSpec::sinusoid(5.0, 1.0, 1);
    const Sampler s(m);
    std::vector<double> y(static_cast<std::size_t>(m.n) + 1);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        s.fill(++seed, y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_Sample)->Arg(1024)->Arg(8192);

void BM_Convolution(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = std::sin(0.01 * static_cast<double>(i));
    const DiscreteSequence f = DiscreteSequence::on_grid(v);
    for (auto _ : state) benchmark::DoNotOptimize(discrete_convolution(f, f).sup_norm());
}
BENCHMARK(BM_Convolution)->Arg(512)->Arg(2048);

void BM_Chi2MomentMatched(benchmark::State& state) {
    const MomentMatchedLaw G = build_moment_matched(static_cast<int>(state.range(0)));
    const MixtureLaw a = MixtureLaw::gaussian(0.0, 0.09), b = MixtureLaw::atoms(G.atoms, G.weights, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(chi2_convolved(a, b).value);
}
BENCHMARK(BM_Chi2MomentMatched)->Arg(3)->Arg(9);

}  // namespace
BENCHMARK_MAIN();
