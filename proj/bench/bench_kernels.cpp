// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include <cmath>

#include "blockfade/codelength.hpp"
#include "blockfade/highsnr.hpp"
#include "blockfade/prediction.hpp"
#include "blockfade/simkit.hpp"
#include "blockfade/unit_energy.hpp"

using namespace blockfade;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel" : "serial"); }

void BM_Quadrature(benchmark::State& state) {
  QuadOptions o;
  o.exec = mode(state);
  o.rel_tol = 1e-12;
  auto f = [](double w) { return std::log1p(1e6 / (1.0 + 1e4 * std::sin(w) * std::sin(w))); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, -kPi, kPi, {}, o).value);
  label(state);
}
BENCHMARK(BM_Quadrature)->Arg(0)->Arg(1);

void BM_LogdetBlockGaussMarkov(benchmark::State& state) {
  const auto m = SpectralModel::block_gauss_markov(8, 0.7, 0.95);
  QuadOptions o;
  o.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(logdet_sigma(m, 1e3, o).value);
  label(state);
}
BENCHMARK(BM_LogdetBlockGaussMarkov)->Arg(0)->Arg(1);

void BM_RankGrid(benchmark::State& state) {
  const auto m = SpectralModel::block_gauss_markov(6, 0.5, 0.9);
  for (auto _ : state)
    benchmark::DoNotOptimize(rank_profile(m, (1u << 6) - 1, kRankGrid, kRankThreshold, mode(state)).functional);
  label(state);
}
BENCHMARK(BM_RankGrid)->Arg(0)->Arg(1);

void BM_CpScan(benchmark::State& state) {
  const auto m = SpectralModel::block_gauss_markov(8, cplx(0.3, 0.4), 0.9);
  QuadOptions o;
  o.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(cp_scan(m, 3.0, o).cp);
  label(state);
}
BENCHMARK(BM_CpScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Simulation(benchmark::State& state) {
  const auto m = SpectralModel::scalar_gauss_markov(0.9);
  SimConfig c;
  c.model = &m;
  c.num_paths = 2000;
  c.path_len = 128;
  c.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(generate_paths(c).h.norm());
  label(state);
}
BENCHMARK(BM_Simulation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FeketeRestarts(benchmark::State& state) {
  FeketeOptions o;
  o.exec = mode(state);
  const ArcSet set({{0, kPi / 2}});
  for (auto _ : state) benchmark::DoNotOptimize(tau_fekete(set, 16, o).tau_n);
  label(state);
}
BENCHMARK(BM_FeketeRestarts)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
