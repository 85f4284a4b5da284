#include <benchmark/benchmark.h>

#include <cmath>

#include "kolmo/discretization.hpp"
#include "kolmo/hypotheses.hpp"
#include "kolmo/invariant_measure.hpp"
#include "kolmo/semigroup.hpp"

namespace kolmo {
namespace {

CoefficientField Exchange2(int d) {
  BuiltinFamily fam;
  fam.dim_d = d;
  if (d == 2) fam.Q0 = Mat::Identity(2, 2);
  return make_builtin(fam);
}

Grid MakeGrid(int d, int n) { return build_grid(d, 6.0, n, BoundaryKind::kDirichlet); }

GridFunction Datum(const Grid& g) {
  return GridFunction::sample(g, 2, [](const Point& x) {
    return Vec((Vec(2) << std::tanh(x(0)), std::exp(-x.squaredNorm())).finished());
  });
}

void BM_AssembleSystem(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Grid g = MakeGrid(d, static_cast<int>(state.range(1)));
  const CoefficientField f = Exchange2(d);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system_operator(f, g).matrix.nonZeros());
  state.counters["unknowns"] = 2.0 * g.unknown_count();
}
BENCHMARK(BM_AssembleSystem)
    ->Args({1, 481})
    ->Args({1, 3001})
    ->Args({2, 81})
    ->Args({2, 161})
    ->Unit(benchmark::kMillisecond);

void BM_FactorStepper(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Grid g = MakeGrid(d, static_cast<int>(state.range(1)));
  const DiscreteOperator op = assemble_system_operator(Exchange2(d), g);
  for (auto _ : state) {
    ThetaStepper s(op, 1e-3, 0.5);
    benchmark::DoNotOptimize(s.dt());
  }
}
BENCHMARK(BM_FactorStepper)
    ->Args({1, 481})
    ->Args({2, 81})
    ->Args({2, 161})
    ->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Grid g = MakeGrid(d, static_cast<int>(state.range(1)));
  const DiscreteOperator op = assemble_system_operator(Exchange2(d), g);
  const ThetaStepper s(op, 1e-3, 0.5);
  Vec u = Datum(g).to_state();
  for (auto _ : state) {
    u = s.step(u);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_Step)->Args({1, 481})->Args({1, 3001})->Args({2, 81})->Args({2, 161})->Unit(
    benchmark::kMicrosecond);

void BM_Evolve(benchmark::State& state) {
  const Grid g = MakeGrid(1, static_cast<int>(state.range(0)));
  const DiscreteOperator op = assemble_system_operator(Exchange2(1), g);
  const GridFunction f0 = Datum(g);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(op, f0, 1.0, 1e-3, 0.5).size());
}
BENCHMARK(BM_Evolve)->Arg(241)->Arg(481)->Unit(benchmark::kMillisecond);

void BM_InvariantDensity(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Grid g = MakeGrid(d, static_cast<int>(state.range(1)));
  const CoefficientField f = Exchange2(d);
  for (auto _ : state) benchmark::DoNotOptimize(solve_scalar_invariant_density(f, g).rho.sum());
}
BENCHMARK(BM_InvariantDensity)
    ->Args({1, 481})
    ->Args({1, 3001})
    ->Args({2, 81})
    ->Unit(benchmark::kMillisecond);

void BM_OracleDensity(benchmark::State& state) {
  const Grid g = MakeGrid(1, static_cast<int>(state.range(0)));
  const CoefficientField f = Exchange2(1);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_density_1d(f, g).rho.sum());
}
BENCHMARK(BM_OracleDensity)->Arg(481)->Unit(benchmark::kMillisecond);

void BM_CheckHypotheses(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const CoefficientField f = Exchange2(d);
  for (auto _ : state) benchmark::DoNotOptimize(check_hypotheses(f, SampleSpec{}).all_pass());
}
BENCHMARK(BM_CheckHypotheses)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kolmo

BENCHMARK_MAIN();
