#include <benchmark/benchmark.h>

#include <random>

#include "dmf/series.hpp"

using namespace dmf;

namespace {

RamifiedSeries dense_series(const Ctx& ctx, std::mt19937& rng, std::int64_t v,
                            std::int64_t len) {
  std::vector<FqElem> c(len);
  for (auto& x : c) x = static_cast<FqElem>(rng() % ctx->field.work.size());
  if (c[0] == 0) c[0] = 1;
  return RamifiedSeries::from_coeffs(ctx, v, std::move(c), v + len);
}

void BM_SeriesMul(benchmark::State& state, std::uint32_t p, std::uint32_t e) {
  const std::int64_t len = state.range(0);
  auto ctx = SeriesContext::create(p, e, p == 2 ? 1 : p - 1, 4 * len);
  std::mt19937 rng(7);
  auto a = dense_series(ctx, rng, 0, len);
  auto b = dense_series(ctx, rng, 0, len);
  for (auto _ : state) benchmark::DoNotOptimize(a.mul(b));
  state.SetComplexityN(len);
}

void BM_SeriesInv(benchmark::State& state, std::uint32_t p, std::uint32_t e) {
  const std::int64_t len = state.range(0);
  auto ctx = SeriesContext::create(p, e, p == 2 ? 1 : p - 1, 4 * len);
  std::mt19937 rng(7);
  auto a = dense_series(ctx, rng, 0, len);
  for (auto _ : state) benchmark::DoNotOptimize(a.inv());
  state.SetComplexityN(len);
}

}  // namespace

BENCHMARK_CAPTURE(BM_SeriesMul, f2, 2u, 1u)->Range(64, 4096)->Complexity();
BENCHMARK_CAPTURE(BM_SeriesMul, f3, 3u, 1u)->Range(64, 4096)->Complexity();
BENCHMARK_CAPTURE(BM_SeriesMul, f4, 2u, 2u)->Range(64, 2048)->Complexity();
BENCHMARK_CAPTURE(BM_SeriesInv, f2, 2u, 1u)->Range(64, 4096)->Complexity();
BENCHMARK_CAPTURE(BM_SeriesInv, f3, 3u, 1u)->Range(64, 2048)->Complexity();

BENCHMARK_MAIN();
