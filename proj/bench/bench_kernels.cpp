#include <benchmark/benchmark.h>

#include "inasup/engine.hpp"
#include "inasup/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace inasup;

namespace {

OpScanConfig scan_config(int dim) {
  OpScanConfig cfg;
  cfg.dim = dim;
  cfg.epsilons = epsilon_grid(0.38, 0.46, 8);
  cfg.initial_conditions = 16;
  cfg.checkpoints = {20000};
  cfg.seed = 1;
  return cfg;
}

void BM_OpScanSerial(benchmark::State& state) {
  const auto cfg = scan_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(op_scan_serial(cfg));
  state.SetItemsProcessed(state.iterations() * 8 * 16 * 20000);
}

void BM_OpScanParallel(benchmark::State& state) {
  const auto cfg = scan_config(static_cast<int>(state.range(0)));
#ifdef _OPENMP
  state.counters["threads"] = omp_get_max_threads();
#endif
  for (auto _ : state) benchmark::DoNotOptimize(op_scan(cfg));
  state.SetItemsProcessed(state.iterations() * 8 * 16 * 20000);
}

void BM_SignaturesSerial(benchmark::State& state) {
  standard_family(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_signatures_serial(static_cast<int>(state.range(0))));
}

void BM_SignaturesParallel(benchmark::State& state) {
  standard_family(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_signatures(static_cast<int>(state.range(0))));
}

void BM_BuildD2(benchmark::State& state) {
  const Workspace ws(MapParams(2, make_rational(11, 25)));
  const auto word = parse_word("1,3,2|-1:-1,0:1");
  BuildOptions opts;
  opts.verify = false;
  opts.semi_optimize = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(build_inasup(ws, word, opts));
}

void BM_VerifyD2(benchmark::State& state) {
  const Workspace ws(MapParams(2, make_rational(11, 25)));
  const auto cert = *build_inasup(ws, parse_word("1,3,2|-1:-1,0:1")).certificate;
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(ws, cert));
}

}  // namespace

BENCHMARK(BM_OpScanSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpScanParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SignaturesSerial)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SignaturesParallel)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildD2)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VerifyD2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
