#include <benchmark/benchmark.h>

#include "berktree/parse.hpp"
#include "berktree/resloc.hpp"

using namespace berktree;

namespace {

Poly family(int d) {
  const std::string D = std::to_string(d), D1 = std::to_string(d - 1);
  return Poly::parse(5, D1 + "*p*z^" + D + " - " + D + "*z^" + D1);
}

void BM_BuildTree(benchmark::State& state) {
  const Poly P = family(3);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_tree(P, n).size());
}
BENCHMARK(BM_BuildTree)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_OrdResAt(benchmark::State& state) {
  const Poly P = family(4);
  const int j = static_cast<int>(state.range(0));
  const BerkPoint x = BerkPoint::ball(Scalar::zero(P.tower().base()), Rational(-1, 3));
  for (auto _ : state) benchmark::DoNotOptimize(ord_res_at(P, j, x));
}
BENCHMARK(BM_OrdResAt)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_CrucialCurvature(benchmark::State& state) {
  const Poly P = family(3);
  const DynTree t = build_tree(P, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(crucial_curvature(P, 1, t).size());
}
BENCHMARK(BM_CrucialCurvature)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_MinResLoc(benchmark::State& state) {
  const Poly P = family(3);
  for (auto _ : state) {
    TreeFamily fam(P);
    benchmark::DoNotOptimize(min_res_loc(fam, 2, 4).ord_res);
  }
}
BENCHMARK(BM_MinResLoc)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
