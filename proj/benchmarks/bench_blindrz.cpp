#include <benchmark/benchmark.h>

#include "blindrz/angle_codec.hpp"
#include "blindrz/audit.hpp"
#include "blindrz/rng.hpp"
#include "blindrz/ubqc.hpp"

using namespace blindrz;

static void BM_ApplyHadamard(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  Statevector s = random_state(n, rng);
  std::size_t q = 0;
  for (auto _ : state) {
    s.apply(GateOp::h(q));
    q = (q + 1) % n;
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.dim()));
}
BENCHMARK(BM_ApplyHadamard)->DenseRange(4, 12, 4);

static void BM_ReducedDensity(benchmark::State& state) {
  Rng rng(2);
  const Statevector s = random_state(12, rng);
  const std::size_t keep[] = {8, 9, 10, 11};
  for (auto _ : state) benchmark::DoNotOptimize(reduced_density(s, keep));
}
BENCHMARK(BM_ReducedDensity);

static void BM_Digitize(benchmark::State& state) {
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(digitize_eps(rng.uniform() * 2 * kPi, 1e-6, Extractor::Floor));
}
BENCHMARK(BM_Digitize);

// Full protocol for one Rz delegation; rounds grow as M(M+1)/2.
static void BM_DelegateRz(benchmark::State& state) {
  const double eps = std::ldexp(kPi, -static_cast<int>(state.range(0)));
  const Circuit c{2, {GateOp::h(0), GateOp::rz(0, 1.2345)}};
  RunOptions o;
  o.epsilon = eps;
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(c, o).transcript.round_trips());
  state.counters["M"] = precision_bits(eps);
}
BENCHMARK(BM_DelegateRz)->DenseRange(3, 15, 4)->Unit(benchmark::kMicrosecond);

static void BM_DelegateRzThreaded(benchmark::State& state) {
  const Circuit c{2, {GateOp::h(0), GateOp::rz(0, 1.2345)}};
  RunOptions o;
  o.epsilon = 1e-2;
  o.threaded = true;
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(c, o).transcript.round_trips());
}
BENCHMARK(BM_DelegateRzThreaded)->Unit(benchmark::kMicrosecond);

static void BM_ExhaustiveAudit(benchmark::State& state) {
  const Circuit c{1, {GateOp::h(0), GateOp::rz(0, 0.4)}};
  MixednessOptions o;
  for (auto _ : state) benchmark::DoNotOptimize(payload_mixedness(c, kPi / 8, o).max_distance);
}
BENCHMARK(BM_ExhaustiveAudit)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
