#include <benchmark/benchmark.h>

#include <random>

#include "icp/propagate.hpp"
#include "icp/search.hpp"

using namespace icp;

namespace {

Icsp sines_icsp() {
  System sys = parse_system("sin(x1) + sin(x2) <= 0;");
  return translate(sys.formulas[0],
                   Box{{"x1", Interval::entire()}, {"x2", Interval::entire()}});
}

// A balanced arithmetic term of the given depth over a handful of bounded
// variables; exercises the bottom-up evaluation path.
TermPtr deep_term(int depth, std::mt19937_64& rng) {
  if (depth == 0) {
    if (rng() % 3 == 0) return Term::constant(std::string("2"));
    return Term::variable("x" + std::to_string(rng() % 6 + 1));
  }
  switch (rng() % 5) {
    case 0:
      return Term::apply(Symbol::Add, {deep_term(depth - 1, rng), deep_term(depth - 1, rng)});
    case 1:
      return Term::apply(Symbol::Sub, {deep_term(depth - 1, rng), deep_term(depth - 1, rng)});
    case 2:
      return Term::apply(Symbol::Mul, {deep_term(depth - 1, rng), deep_term(depth - 1, rng)});
    case 3:
      return Term::apply(Symbol::Sq, {deep_term(depth - 1, rng)});
    default:
      return Term::apply(Symbol::Sin, {deep_term(depth - 1, rng)});
  }
}

Icsp deep_icsp(int depth) {
  std::mt19937_64 rng(depth * 977);
  Box env;
  for (int i = 1; i <= 6; ++i)
    env["x" + std::to_string(i)] = Interval(-2.0 + i * 0.1, 1.0 + i * 0.2);
  return translate_term(deep_term(depth, rng), env);
}

void BM_GpaSines(benchmark::State& state) {
  Icsp icsp = sines_icsp();
  long activations = 0;
  for (auto _ : state) {
    auto out = gpa(icsp, icsp.domains, InitSet::all_constraints(), SelectionPolicy::fifo());
    activations = out.stats.total_dro_calls;
    benchmark::DoNotOptimize(out);
  }
  state.counters["dro_calls"] = static_cast<double>(activations);
}
BENCHMARK(BM_GpaSines);

void BM_PsiSines(benchmark::State& state) {
  Icsp icsp = sines_icsp();
  long activations = 0;
  for (auto _ : state) {
    auto out = psi(icsp);
    activations = out.stats.total_dro_calls;
    benchmark::DoNotOptimize(out);
  }
  state.counters["dro_calls"] = static_cast<double>(activations);
}
BENCHMARK(BM_PsiSines);

void BM_GpaDeepTerm(benchmark::State& state) {
  Icsp icsp = deep_icsp(static_cast<int>(state.range(0)));
  long activations = 0;
  for (auto _ : state) {
    auto out = gpa(icsp, icsp.domains, InitSet::all_constraints(), SelectionPolicy::fifo());
    activations = out.stats.total_dro_calls;
    benchmark::DoNotOptimize(out);
  }
  state.counters["dro_calls"] = static_cast<double>(activations);
  state.counters["constraints"] = static_cast<double>(icsp.constraints.size());
}
BENCHMARK(BM_GpaDeepTerm)->Arg(6)->Arg(9);

void BM_PsiDeepTerm(benchmark::State& state) {
  Icsp icsp = deep_icsp(static_cast<int>(state.range(0)));
  long activations = 0;
  for (auto _ : state) {
    auto out = psi(icsp);
    activations = out.stats.total_dro_calls;
    benchmark::DoNotOptimize(out);
  }
  state.counters["dro_calls"] = static_cast<double>(activations);
  state.counters["constraints"] = static_cast<double>(icsp.constraints.size());
}
BENCHMARK(BM_PsiDeepTerm)->Arg(6)->Arg(9);

void BM_SolveDisc(benchmark::State& state) {
  System sys = parse_system(
      "var x in [-2,2]; var y in [-2,2];\n"
      "x^2 + y^2 - 1 <= 0;\n");
  SolveConfig cfg;
  cfg.min_width = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    Cover cover = solve_system(sys, cfg);
    benchmark::DoNotOptimize(cover);
  }
}
BENCHMARK(BM_SolveDisc)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
