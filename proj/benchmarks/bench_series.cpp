// Kernel benchmarks: exact series products, jet products, matrix
// brackets, and full environment construction.

#include <benchmark/benchmark.h>

#include "cmch/towers.hpp"

using namespace cmch;
using K = Exact;
using LS = LaurentSeries<K>;

namespace {

LS random_series(Rng& rng, int lo, int hi) {
  LS s;
  for (int d = lo; d <= hi; ++d) s.set(d, rng.gauss<K>());
  return s;
}

void bm_series_mul(benchmark::State& state) {
  Rng rng(1);
  int n = int(state.range(0));
  LS a = random_series(rng, -n, n), b = random_series(rng, -n, n);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(bm_series_mul)->Arg(8)->Arg(16)->Arg(32);

void bm_series_inverse(benchmark::State& state) {
  Rng rng(2);
  LS a = LS::monomial(0, K(1)) + random_series(rng, 1, 16);
  for (auto _ : state) benchmark::DoNotOptimize(a.inverse(-24, 24));
}
BENCHMARK(bm_series_inverse);

void bm_jet_mul(benchmark::State& state) {
  EnvConfig cfg;
  cfg.N = int(state.range(0));
  cfg.mode = Mode::Minus;
  cfg.seed = 3;
  auto env = build_environment<K>(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(env.A * env.B);
}
BENCHMARK(bm_jet_mul)->Arg(0)->Arg(1)->Arg(2);

void bm_bracket(benchmark::State& state) {
  EnvConfig cfg;
  cfg.N = int(state.range(0));
  cfg.mode = Mode::Minus;
  cfg.seed = 4;
  auto env = build_environment<K>(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(bracket(env.h.Y, env.kl.Vp));
}
BENCHMARK(bm_bracket)->Arg(0)->Arg(1)->Arg(2);

void bm_environment(benchmark::State& state) {
  EnvConfig cfg;
  cfg.N = int(state.range(0));
  cfg.mode = Mode::Minus;
  cfg.seed = 5;
  for (auto _ : state) benchmark::DoNotOptimize(build_environment<K>(cfg));
}
BENCHMARK(bm_environment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// the float backend, for speed comparison against the exact one
void bm_environment_float(benchmark::State& state) {
  EnvConfig cfg;
  cfg.N = int(state.range(0));
  cfg.mode = Mode::Minus;
  cfg.seed = 5;
  for (auto _ : state) benchmark::DoNotOptimize(build_environment<Fp>(cfg));
}
BENCHMARK(bm_environment_float)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void bm_ds_plus_residual(benchmark::State& state) {
  EnvConfig cfg;
  cfg.N = 1;
  cfg.mode = Mode::Minus;
  cfg.seed = 6;
  auto env = build_environment<K>(cfg);
  Checker<K> ck(env.cf, env.cfg.rep_lo, env.cfg.rep_hi);
  for (auto _ : state) {
    auto phid = env.h.phihat.euler();
    benchmark::DoNotOptimize(phid);
  }
}
BENCHMARK(bm_ds_plus_residual);

}  // namespace

BENCHMARK_MAIN();
