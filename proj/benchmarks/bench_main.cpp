#include <benchmark/benchmark.h>

#include "divcw/engine.hpp"
#include "divcw/graph.hpp"
#include "divcw/measures.hpp"
#include "divcw/mso/mso_core.hpp"
#include "divcw/problems.hpp"

namespace {

using namespace divcw;

void BM_solve_cover(benchmark::State& state) {
    const CwDecomposition d = gen_path(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto core = vc_core(3, d);
        benchmark::DoNotOptimize(solve_single(*core, d));
    }
}
BENCHMARK(BM_solve_cover)->Arg(16)->Arg(64)->Arg(256);

void BM_diverse_pair_sum(benchmark::State& state) {
    const CwDecomposition d = gen_path(static_cast<int>(state.range(0)));
    const VennMeasure f = divsum_as_venn(2);
    for (auto _ : state) {
        auto a = ds_core(2, d);
        auto b = ds_core(2, d);
        benchmark::DoNotOptimize(diverse_solve({a.get(), b.get()}, f, d));
    }
}
BENCHMARK(BM_diverse_pair_sum)->Arg(8)->Arg(16)->Arg(32);

void BM_diverse_min_distance(benchmark::State& state) {
    const CwDecomposition d = gen_path(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto a = ds_core(2, d);
        auto b = ds_core(2, d);
        benchmark::DoNotOptimize(min_diverse_solve({a.get(), b.get()}, 2, d));
    }
}
BENCHMARK(BM_diverse_min_distance)->Arg(8)->Arg(16);

void BM_model_check_domination(benchmark::State& state) {
    const CwDecomposition d = gen_path(static_cast<int>(state.range(0)));
    const mso::Formula f = mso::parse_formula(
        "exists set S forall vertex x exists vertex y : (x in S) | (adj(x,y) & y in S)");
    for (auto _ : state) benchmark::DoNotOptimize(mso::model_check(f, d));
}
BENCHMARK(BM_model_check_domination)->Arg(4)->Arg(6)->Arg(8);

void BM_clique_generation(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(gen_clique(static_cast<int>(state.range(0)))));
}
BENCHMARK(BM_clique_generation)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
