#include <benchmark/benchmark.h>

#include <vector>

#include "bellsplit/bell.hpp"
#include "bellsplit/regions.hpp"
#include "bellsplit/state.hpp"
#include "bellsplit/wavepacket.hpp"

using namespace bellsplit;

namespace {

std::vector<ScatteringMatrix> splitters(std::size_t n) {
  Rng rng(2024);
  std::vector<ScatteringMatrix> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(make_scattering(haar_unitary<4>(rng)));
  return out;
}

void BM_HaarUnitary(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(haar_unitary<4>(rng));
}
BENCHMARK(BM_HaarUnitary);

void BM_HermEigen4(benchmark::State& state) {
  const CMat4 rho = build_rho(gammas(splitters(1)[0]), 0.5).rho;
  for (auto _ : state) benchmark::DoNotOptimize(herm_eigen(rho));
}
BENCHMARK(BM_HermEigen4);

void BM_ConcurrenceClosed(benchmark::State& state) {
  const HybridMatrix x = hybrid(splitters(1)[0]);
  for (auto _ : state) benchmark::DoNotOptimize(concurrence_closed(x, 0.5));
}
BENCHMARK(BM_ConcurrenceClosed);

void BM_ConcurrenceWootters(benchmark::State& state) {
  const CMat4 rho = build_rho(gammas(splitters(1)[0]), 0.5).rho;
  for (auto _ : state) benchmark::DoNotOptimize(concurrence_wootters(rho));
}
BENCHMARK(BM_ConcurrenceWootters);

void BM_EmaxClosed(benchmark::State& state) {
  const CMat2 gram = hybrid(splitters(1)[0]).gram;
  for (auto _ : state) benchmark::DoNotOptimize(emax_closed(gram, 0.5));
}
BENCHMARK(BM_EmaxClosed);

void BM_ChshBruteforce(benchmark::State& state) {
  const CMat4 rho = build_rho(gammas(splitters(1)[0]), 0.5).rho;
  const int budget = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(chsh_bruteforce(rho, budget));
}
BENCHMARK(BM_ChshBruteforce)->Arg(kMinChshBudget)->Arg(kDefaultChshBudget)->Unit(benchmark::kMillisecond);

void BM_Scan(benchmark::State& state) {
  ScanOptions opt;
  opt.alpha_points = static_cast<std::size_t>(state.range(0));
  opt.hv_points = opt.alpha_points;
  for (auto _ : state) benchmark::DoNotOptimize(scan(opt));
}
BENCHMARK(BM_Scan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_AlphaFiniteWindow(benchmark::State& state) {
  const Wavepacket psi = Wavepacket::gaussian(0.0, 1.0);
  const Wavepacket phi = Wavepacket::gaussian(0.0, 1.0, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(alpha_finite_window(psi, phi, 0.35, 5.0));
}
BENCHMARK(BM_AlphaFiniteWindow)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
