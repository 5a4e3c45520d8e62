#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "zetapair/arithmetic.hpp"
#include "zetapair/predictions.hpp"
#include "zetapair/special.hpp"
#include "zetapair/statistics.hpp"
#include "zetapair/testfn.hpp"
#include "zetapair/zeros.hpp"

using namespace zetapair;

namespace {

const ZeroList& zeros_2000() {
  static const ZeroList z = find_zeros(0.0, 2000.0);
  return z;
}

KernelContext context() {
  static const auto tables = std::make_shared<const ArithmeticTables>(build_tables(1000000));
  KernelContext ctx;
  ctx.tables = tables;
  return ctx;
}

}  // namespace

static void BM_Sieve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_tables(static_cast<std::uint64_t>(state.range(0))).theta);
}
BENCHMARK(BM_Sieve)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_HardyZ(benchmark::State& state) {
  double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hardy_z(t));
    t += 0.01;
  }
}
BENCHMARK(BM_HardyZ)->Arg(1000)->Arg(100000)->Arg(10000000);

static void BM_ZetaLogDerivPrime(benchmark::State& state) {
  double u = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zeta_logderiv_prime(cplx(1.0, u)).value);
    u += 0.001;
  }
}
BENCHMARK(BM_ZetaLogDerivPrime);

static void BM_FindZeros(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_zeros(0.0, static_cast<double>(state.range(0))).ordinates.size());
}
BENCHMARK(BM_FindZeros)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_PairSum(benchmark::State& state) {
  const auto omega = make_smooth_bump(0.9);
  const auto& z = zeros_2000();
  for (auto _ : state) benchmark::DoNotOptimize(pair_sum(z, omega, 0.3, 2000.0, 0.0, 1).value);
}
BENCHMARK(BM_PairSum)->Unit(benchmark::kMillisecond);

static void BM_KernelGrid(benchmark::State& state) {
  const auto ctx = context();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernel_parts_grid(0.05, static_cast<std::size_t>(state.range(0)), ctx).size());
}
BENCHMARK(BM_KernelGrid)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_BumpConstruction(benchmark::State& state) {
  const double xi = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(make_smooth_bump(xi).truncation_radius());
}
BENCHMARK(BM_BumpConstruction)->Arg(5)->Arg(9)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_BumpEval(benchmark::State& state) {
  const auto f = make_smooth_bump(0.9);
  double u = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.eval(u));
    u = u > 40.0 ? 0.0 : u + 0.013;
  }
}
BENCHMARK(BM_BumpEval);

BENCHMARK_MAIN();
