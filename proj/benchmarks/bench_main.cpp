#include "dippl/generators.hpp"
#include "dippl/infer.hpp"

#include <benchmark/benchmark.h>

using namespace dippl;

namespace {

void query_last(benchmark::State& state, const Program& p, Arithmetic mode) {
  auto event = expr::var(p.vars.back());
  for (auto _ : state) {
    CompiledProgram c = compile(p);
    auto r = event_prob(c, default_state(c), *event, mode);
    benchmark::DoNotOptimize(r.approx);
    state.counters["nodes"] = static_cast<double>(c.stats.node_count);
  }
}

void BM_ChainCompile(benchmark::State& state) {
  Program p = gen::gen_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compile(p).stats.node_count);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChainCompile)->DenseRange(10, 150, 20)->Complexity(benchmark::oAuto);

void BM_ChainQueryExact(benchmark::State& state) {
  query_last(state, gen::gen_chain(static_cast<std::size_t>(state.range(0))), Arithmetic::Exact);
}
BENCHMARK(BM_ChainQueryExact)->Arg(50)->Arg(150);

void BM_ChainQueryFloat(benchmark::State& state) {
  query_last(state, gen::gen_chain(static_cast<std::size_t>(state.range(0))), Arithmetic::Float);
}
BENCHMARK(BM_ChainQueryFloat)->Arg(50)->Arg(150);

void BM_ChainQueryOnly(benchmark::State& state) {
  Program p = gen::gen_chain(static_cast<std::size_t>(state.range(0)));
  CompiledProgram c = compile(p);
  auto event = expr::var(p.vars.back());
  State init = default_state(c);
  for (auto _ : state) benchmark::DoNotOptimize(event_prob(c, init, *event).approx);
}
BENCHMARK(BM_ChainQueryOnly)->Arg(150);

// Arguments: grid side, determinism in percent.
void BM_GridCompile(benchmark::State& state) {
  Program p = gen::gen_grid(static_cast<std::size_t>(state.range(0)), static_cast<double>(state.range(1)) / 100,
                            gen::kDefaultSeed);
  std::size_t nodes = 0;
  for (auto _ : state) benchmark::DoNotOptimize(nodes = compile(p).stats.node_count);
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_GridCompile)->ArgsProduct({{3, 4, 5, 6}, {0, 50, 90}})->Unit(benchmark::kMicrosecond);

void BM_LadderCompile(benchmark::State& state) {
  Program p = gen::gen_ladder(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compile(p).stats.node_count);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LadderCompile)->RangeMultiplier(2)->Range(2, 64)->Complexity(benchmark::oAuto);

}  // namespace

BENCHMARK_MAIN();
