#include <benchmark/benchmark.h>

#include "qvar/backtest.hpp"
#include "qvar/cqar.hpp"
#include "qvar/diagnostics.hpp"
#include "qvar/ingest.hpp"
#include "qvar/qar.hpp"

namespace {

qvar::Series series(std::size_t n) {
    qvar::ingest::SyntheticSpec spec;
    spec.n = n;
    spec.seed = 1;
    return qvar::ingest::generate(spec);
}

void BM_QarFit(benchmark::State& state) {
    const auto s = series(static_cast<std::size_t>(state.range(0)));
    const auto p = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qvar::qar::fit(s, p, qvar::QuantileLevel(0.9)));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_QarFit)->ArgsProduct({{250, 1000, 4000}, {1, 6}})->Unit(benchmark::kMillisecond);

void BM_SelectLag(benchmark::State& state) {
    const auto s = series(1000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qvar::diagnostics::select_lag(s, qvar::QuantileLevel(0.5), 10));
    }
}
BENCHMARK(BM_SelectLag)->Unit(benchmark::kMillisecond);

// One predict/observe step at history length t.
void BM_CqarStep(benchmark::State& state) {
    const auto s = series(static_cast<std::size_t>(state.range(0)) + 2);
    qvar::cqar::CqarConfig c;
    c.alpha = qvar::QuantileLevel(0.9);
    c.lag = 5;
    c.mcmc_iters = 1000;
    c.burn_in = 200;
    const auto v = s.values();
    for (auto _ : state) {
        state.PauseTiming();
        qvar::cqar::CqarState st(c, v.first(c.lag));
        for (std::size_t t = c.lag; t + 1 < v.size(); ++t) {
            (void)st.predict();
            st.observe(v[t]);
        }
        state.ResumeTiming();
        benchmark::DoNotOptimize(st.predict());
        st.observe(v.back());
    }
}
BENCHMARK(BM_CqarStep)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Christoffersen(benchmark::State& state) {
    std::vector<bool> v(636);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 11 == 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qvar::backtest::christoffersen(v, qvar::QuantileLevel(0.9)));
    }
}
BENCHMARK(BM_Christoffersen);

}  // namespace

BENCHMARK_MAIN();
