#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>

#include "torusfold/kernels.hpp"
#include "torusfold/random.hpp"

using namespace torusfold;

namespace {

TrigPoly sparse_poly(std::size_t dim, std::int64_t spread, std::size_t terms, std::uint64_t seed) {
  Rng rng(seed);
  TrigPoly f(dim);
  while (f.size() < terms) {
    Frequency l(dim);
    for (auto& x : l) x = rng.uniform_int(-spread, spread);
    f.add_term(l, rng.complex_normal());
  }
  return f;
}

void expect_rel(double got, double want, double tol) {
  EXPECT_LE(std::abs(got - want), tol * std::max(1.0, std::abs(want))) << got << " vs " << want;
}

}  // namespace

TEST(GridKernel, MatchesReferenceMultivariate) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(seed);
    const std::size_t dim = 1 + seed % 3;
    std::vector<std::int64_t> bounds(dim), grid(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      bounds[k] = rng.uniform_int(0, 4);
      grid[k] = rng.uniform_int(1, 11);
    }
    const TrigPoly f = random_poly(BoxSpec(bounds), CoefficientDist::gaussian, rng);
    expect_rel(kernels::grid_mean_abs(f, grid), kernels::grid_mean_abs_reference(f, grid), 1e-12);
  }
}

TEST(GridKernel, DirectLinePath) {
  // Few terms on a long line take the table-driven direct path.
  const TrigPoly f = sparse_poly(1, 5000, 3, 1);
  const std::vector<std::int64_t> grid = {20011};
  expect_rel(kernels::grid_mean_abs(f, grid), kernels::grid_mean_abs_reference(f, grid), 1e-12);
}

TEST(GridKernel, SingleFftPath) {
  const TrigPoly f = sparse_poly(1, 3000, 60, 2);
  const std::vector<std::int64_t> grid = {7 * 1024};
  expect_rel(kernels::grid_mean_abs(f, grid), kernels::grid_mean_abs_reference(f, grid), 1e-12);
}

TEST(GridKernel, ChunkedFftPathWithHugeFrequencies) {
  // Frequencies far beyond the grid alias exactly; 81920 points are chunked.
  TrigPoly f = sparse_poly(1, 40000, 40, 3);
  f.add_term({123456789012LL}, Complex(0.5, 0.5));
  const std::vector<std::int64_t> grid = {81920};
  expect_rel(kernels::grid_mean_abs(f, grid), kernels::grid_mean_abs_reference(f, grid), 1e-11);
}

TEST(GridKernel, MixedAxesWithFftLine) {
  const TrigPoly f = sparse_poly(3, 40, 80, 4);
  const std::vector<std::int64_t> grid = {5, 3, 1200};
  expect_rel(kernels::grid_mean_abs(f, grid), kernels::grid_mean_abs_reference(f, grid), 1e-12);
}

TEST(GridKernel, ScalarAndZero) {
  EXPECT_EQ(kernels::grid_mean_abs(TrigPoly(2), std::vector<std::int64_t>{3, 3}), 0.0);
  EXPECT_DOUBLE_EQ(kernels::grid_mean_abs(TrigPoly::constant(0, Complex(3, 4)), {}), 5.0);
}

TEST(GridKernel, BitIdenticalAcrossThreadCounts) {
  const TrigPoly f = sparse_poly(2, 300, 50, 5);
  const std::vector<std::int64_t> grid = {37, 4096};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double one = kernels::grid_mean_abs(f, grid);
  omp_set_num_threads(4);
  const double four = kernels::grid_mean_abs(f, grid);
  omp_set_num_threads(saved);
  EXPECT_EQ(one, four);
}

TEST(PairwiseSum, ExactOnIntegersAndOrderFixed) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(kernels::pairwise_sum(v), 999.0 * 1000 / 2);
  EXPECT_EQ(kernels::pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(CollisionKernel, BoxFoldsInLexOrder) {
  const BoxSpec box({1, 2});
  const FoldingSeq tau({1, 3});
  const auto folds = kernels::box_folds(box, tau);
  const auto pts = enumerate_box(box);
  ASSERT_EQ(folds.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(folds[i], fold(pts[i], tau));
    EXPECT_EQ(kernels::decode_box_index(box, static_cast<std::int64_t>(i)), pts[i].vec());
  }
}
