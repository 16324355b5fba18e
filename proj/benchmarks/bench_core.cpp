#include <benchmark/benchmark.h>

#include "pdk/barrier.hpp"
#include "pdk/generator.hpp"
#include "pdk/presets.hpp"
#include "pdk/scale.hpp"
#include "pdk/simulate.hpp"
#include "pdk/value.hpp"
#include "pdk/verify.hpp"

namespace {

void BM_BuildBasis(benchmark::State& state) {
    const pdk::ProblemSpec s = pdk::preset(state.range(0) == 0 ? "case1p" : "case1");
    for (auto _ : state) {
        benchmark::DoNotOptimize(pdk::build_basis(s.model, s.q));
    }
}
BENCHMARK(BM_BuildBasis)->Arg(0)->Arg(1);

void BM_SolveBarrier(benchmark::State& state) {
    const pdk::SpecBases bases = pdk::build_spec_bases(
        pdk::preset(state.range(0) == 0 ? "case1p" : "case1"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pdk::solve_barrier(bases));
    }
}
BENCHMARK(BM_SolveBarrier)->Arg(0)->Arg(1);

void BM_ValueBuild(benchmark::State& state) {
    const pdk::SpecBases bases = pdk::build_spec_bases(pdk::preset("case1"));
    const double bs = pdk::solve_barrier(bases).b_star;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pdk::ValueFunction(bases, bs));
    }
}
BENCHMARK(BM_ValueBuild);

void BM_ValueEval(benchmark::State& state) {
    const pdk::SpecBases bases = pdk::build_spec_bases(pdk::preset("case1"));
    const pdk::ValueFunction v(bases, pdk::solve_barrier(bases).b_star);
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(v(x));
        x += 0.01;
        if (x > 12.0) x = 0.0;
    }
}
BENCHMARK(BM_ValueEval);

void BM_GeneratorApply(benchmark::State& state) {
    const pdk::SpecBases bases = pdk::build_spec_bases(pdk::preset("case1"));
    const pdk::PiecewiseExpAffine w = pdk::piecewise_W(bases.q_basis);
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pdk::generator_apply(bases.spec.model, bases.spec.q, w, x));
        x += 0.05;
        if (x > 10.0) x = 0.1;
    }
}
BENCHMARK(BM_GeneratorApply);

void BM_SimPathExact(benchmark::State& state) {
    const pdk::ProblemSpec s = pdk::preset("case1p");
    pdk::SimConfig cfg;
    cfg.n_paths = 1;
    cfg.horizon_t = 250.0;
    std::uint64_t idx = 0;
    for (auto _ : state) {
        cfg.seed = 1000 + idx++;
        benchmark::DoNotOptimize(pdk::simulate_value(s, 3.8, 2.0, cfg));
    }
}
BENCHMARK(BM_SimPathExact);

void BM_SimPathDiffusion(benchmark::State& state) {
    const pdk::ProblemSpec s = pdk::preset("case1");
    pdk::SimConfig cfg;
    cfg.n_paths = 1;
    cfg.horizon_t = 50.0;
    cfg.dt = 1e-3;
    std::uint64_t idx = 0;
    for (auto _ : state) {
        cfg.seed = 2000 + idx++;
        benchmark::DoNotOptimize(pdk::simulate_value(s, 3.8, 2.0, cfg));
    }
}
BENCHMARK(BM_SimPathDiffusion);

} // namespace

BENCHMARK_MAIN();
