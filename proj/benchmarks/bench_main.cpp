// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <filesystem>

#include "matmult/matmult.hpp"

namespace {

const matmult::MatrixLaw& sl2() {
  static const auto law =
      matmult::load_law(std::filesystem::path(MATMULT_DATA_DIR) / "laws" / "sl2.law.json");
  return law;
}

void BM_Philox(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(matmult::random_bits({1, 2, i++}));
}
BENCHMARK(BM_Philox);

void BM_BuildTransfer(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(matmult::build_transfer(sl2(), k, matmult::Flavor::Complex));
  state.counters["l"] = static_cast<double>(matmult::lift_dimension(2, k, matmult::Flavor::Complex));
}
BENCHMARK(BM_BuildTransfer)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_CharPoly(benchmark::State& state) {
  const auto op = matmult::build_transfer(sl2(), static_cast<int>(state.range(0)), matmult::Flavor::Complex);
  for (auto _ : state) benchmark::DoNotOptimize(matmult::char_poly(op));
}
BENCHMARK(BM_CharPoly)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_Sieve(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(matmult::build_sieve(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x));
}
BENCHMARK(BM_Sieve)->RangeMultiplier(10)->Range(10'000, 10'000'000)->Unit(benchmark::kMillisecond);

void BM_EulerProduct(benchmark::State& state) {
  const matmult::PrimeTable primes(static_cast<std::uint64_t>(state.range(0)));
  const matmult::Complex z(1.183, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(matmult::euler_P(z, primes));
}
BENCHMARK(BM_EulerProduct)->RangeMultiplier(10)->Range(100'000, 10'000'000)->Unit(benchmark::kMillisecond);

void BM_McTrial(benchmark::State& state) {
  const auto table = matmult::build_sieve(static_cast<std::uint64_t>(state.range(0)));
  const matmult::McOptions memo{}, streaming{.memo_bytes_cap = 0};
  const auto& opts = state.range(1) ? memo : streaming;
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(matmult::mc_partial_sum(sl2(), table, 1, trial++, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McTrial)->ArgsProduct({{10'000, 100'000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Gripenberg(benchmark::State& state) {
  const matmult::JsrOptions opts{.delta = 1.0 / static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(matmult::gripenberg(sl2().atoms(), opts));
}
BENCHMARK(BM_Gripenberg)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
