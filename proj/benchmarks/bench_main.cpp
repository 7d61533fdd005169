#include "tkz/dft.hpp"
#include "tkz/generators.hpp"
#include "tkz/random.hpp"
#include "tkz/solvers.hpp"
#include "tkz/tensor_ops.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace tkz;

namespace {

Tensor3 random_tensor(std::size_t m, std::size_t l, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Tensor3 t(m, l, n);
  for (double& v : t.data()) v = rng.normal();
  return t;
}

void BM_TprodNaive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor3 a = random_tensor(20, 20, n, 1), x = random_tensor(20, 5, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(tprod_naive(a, x));
}
BENCHMARK(BM_TprodNaive)->Arg(4)->Arg(16)->Arg(64);

void BM_TprodFft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor3 a = random_tensor(20, 20, n, 1), x = random_tensor(20, 5, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(tprod_fft(a, x));
}
BENCHMARK(BM_TprodFft)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_TubeDft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  TubeDft plan(n);
  Rng rng(3);
  std::vector<std::complex<double>> tube(n);
  for (auto& v : tube) v = {rng.normal(), 0.0};
  for (auto _ : state) {
    plan.forward(tube);
    benchmark::DoNotOptimize(tube.data());
  }
}
// Powers of two, small odd lengths and a prime above the direct crossover.
BENCHMARK(BM_TubeDft)->Arg(8)->Arg(10)->Arg(63)->Arg(64)->Arg(127)->Arg(1024);

void BM_TrklSolve(benchmark::State& state) {
  const auto gp = gen_tensor_gaussian(GenSpec::defaults(Family::TensorGaussian));
  SolverConfig cfg;
  cfg.max_iters = 1000;
  cfg.log_stride = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(trkl_solve(gp.problem, gp.problem.zero_iterate(), cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_TrklSolve)->Unit(benchmark::kMillisecond);

void BM_TrklbSolve(benchmark::State& state) {
  const auto gp = gen_eq_bound(GenSpec::defaults(Family::EqBound));
  SolverConfig cfg;
  cfg.max_iters = 1000;
  cfg.log_stride = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(trklb_solve(gp.problem, gp.problem.zero_iterate(), cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_TrklbSolve)->Unit(benchmark::kMillisecond);

void BM_BmrkSolve(benchmark::State& state) {
  GenSpec s = GenSpec::defaults(Family::MatrixGaussian);
  s.block_size = static_cast<std::size_t>(state.range(0));
  const auto gp = gen_matrix_gaussian(s);
  SolverConfig cfg;
  cfg.max_iters = 1000;
  cfg.log_stride = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(bmrk_solve(gp.problem, gp.problem.zero_iterate(), cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_BmrkSolve)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
