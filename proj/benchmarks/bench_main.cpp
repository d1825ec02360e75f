#include <benchmark/benchmark.h>

#include <random>

#include "affinv/phase_space.hpp"

using namespace affinv;

namespace {

PhasePoint make_point(const AlgebraPtr& alg, int band, int grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GroupLoop g = exp_loop(random_loop(alg, band, rng), grid);
  LoopElement mu = random_loop(alg, band, rng);
  return PhasePoint(std::move(g), std::move(mu), Complex(1, 0.5));
}

void BM_LoopBracket(benchmark::State& state) {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(1);
  const auto x = random_loop(alg, static_cast<int>(state.range(0)), rng);
  const auto y = random_loop(alg, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(loop_bracket(x, y));
}
BENCHMARK(BM_LoopBracket)->Arg(4)->Arg(16)->Arg(63);

void BM_GridRoundTrip(benchmark::State& state) {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(2);
  const auto x = random_loop(alg, 4, rng);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(from_grid(to_grid(x, grid), alg));
}
BENCHMARK(BM_GridRoundTrip)->Arg(64)->Arg(128)->Arg(256);

void BM_ExpLoop(benchmark::State& state) {
  const auto alg = OrthogonalAlgebra::sl2();
  std::mt19937_64 rng(3);
  const auto x = random_loop(alg, 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(exp_loop(x, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ExpLoop)->Arg(128);

void BM_MomentumLeft(benchmark::State& state) {
  const auto p = make_point(OrthogonalAlgebra::sl2(), 4, static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(momentum_left(p));
}
BENCHMARK(BM_MomentumLeft)->Arg(128)->Arg(256);

void BM_PoissonBracket(benchmark::State& state) {
  const auto alg = OrthogonalAlgebra::so3();
  const auto p = make_point(alg, 4, 128, 5);
  std::mt19937_64 rng(6);
  const auto phi = make_momentum_functional(FunctionalKind::left, random_loop(alg, 4, rng)) +
                   make_momentum_functional(FunctionalKind::scalar, Complex(0.7, 0.1));
  const auto psi = make_momentum_functional(FunctionalKind::left, random_loop(alg, 4, rng)) +
                   make_momentum_functional(FunctionalKind::right, random_loop(alg, 4, rng));
  for (auto _ : state) benchmark::DoNotOptimize(poisson(phi, psi, p));
}
BENCHMARK(BM_PoissonBracket);

void BM_MomentumEquation(benchmark::State& state) {
  const auto alg = OrthogonalAlgebra::sl2();
  const auto p = make_point(alg, 4, 128, 7);
  std::mt19937_64 rng(8);
  const auto phi = make_momentum_functional(FunctionalKind::left, random_loop(alg, 4, rng));
  const auto x = random_loop(alg, 4, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(momentum_equation_residual(FunctionalKind::left, x, phi, p));
}
BENCHMARK(BM_MomentumEquation);

}  // namespace

BENCHMARK_MAIN();
