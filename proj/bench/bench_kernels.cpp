// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "torusfold/kernels.hpp"
#include "torusfold/random.hpp"
#include "torusfold/spectrum.hpp"
#include "torusfold/trigpoly.hpp"

namespace tf = torusfold;

namespace {

tf::TrigPoly sample_poly(std::vector<std::int64_t> bounds) {
  tf::Rng rng(7);
  return tf::random_poly(tf::BoxSpec(std::move(bounds)), tf::CoefficientDist::gaussian, rng);
}

void BM_GridKernel(benchmark::State& state) {
  const auto f = sample_poly({2, 2, 2});
  const std::int64_t n = state.range(0);
  const std::vector<std::int64_t> grid = {n, n, n};
  for (auto _ : state) benchmark::DoNotOptimize(tf::kernels::grid_mean_abs(f, grid));
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_GridKernel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GridReference(benchmark::State& state) {
  const auto f = sample_poly({2, 2, 2});
  const std::int64_t n = state.range(0);
  const std::vector<std::int64_t> grid = {n, n, n};
  for (auto _ : state) benchmark::DoNotOptimize(tf::kernels::grid_mean_abs_reference(f, grid));
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_GridReference)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

// Univariate line of a folded polynomial, long enough for the chunked FFT.
void BM_GridKernelLine(benchmark::State& state) {
  tf::TrigPoly f(1);
  tf::Rng rng(11);
  for (std::int64_t k = -40; k <= 40; ++k) f.add_term({k * 97}, rng.complex_normal());
  const std::vector<std::int64_t> grid = {state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(tf::kernels::grid_mean_abs(f, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GridKernelLine)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 22)->Unit(benchmark::kMillisecond);

void BM_CollisionKernel(benchmark::State& state) {
  const tf::BoxSpec box(std::vector<std::int64_t>(static_cast<std::size_t>(state.range(0)), 1));
  const tf::FoldingSeq taus = tf::suggest_tau(box, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(tf::kernels::collision_pairs(box, taus, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(box.cardinality()));
}
BENCHMARK(BM_CollisionKernel)->DenseRange(4, 10, 3)->Unit(benchmark::kMillisecond);

void BM_CollisionReference(benchmark::State& state) {
  const tf::BoxSpec box(std::vector<std::int64_t>(static_cast<std::size_t>(state.range(0)), 1));
  const tf::FoldingSeq taus = tf::suggest_tau(box, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(tf::kernels::collision_pairs_reference(box, taus, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(box.cardinality()));
}
BENCHMARK(BM_CollisionReference)->DenseRange(4, 7, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
