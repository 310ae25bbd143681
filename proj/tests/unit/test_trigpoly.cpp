#include <gtest/gtest.h>

#include <cmath>

#include "torusfold/error.hpp"
#include "torusfold/random.hpp"
#include "torusfold/trigpoly.hpp"

using namespace torusfold;

namespace {

constexpr double kTol = 1e-12;

void expect_close(Complex a, Complex b, double tol = kTol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

TrigPoly random_box_poly(std::vector<std::int64_t> bounds, std::uint64_t seed) {
  Rng rng(seed);
  return random_poly(BoxSpec(std::move(bounds)), CoefficientDist::gaussian, rng);
}

}  // namespace

TEST(UnitRoot, QuarterTurnsAndHugeNumerators) {
  expect_close(unit_root(1, 4), Complex(0, 1));
  expect_close(unit_root(-1, 4), Complex(0, -1));
  expect_close(unit_root(2, 4), Complex(-1, 0));
  const Wide huge = static_cast<Wide>(1) << 100;
  // 2^100 mod 3 = 1
  expect_close(unit_root(huge, 3), unit_root(1, 3));
}

TEST(TrigPoly, AddTermDropsExactZeros) {
  TrigPoly f(2);
  f.add_term({1, 2}, 3.0);
  f.add_term({1, 2}, -3.0);
  EXPECT_TRUE(f.empty());
  EXPECT_THROW(f.add_term({1}, 1.0), DomainError);
}

TEST(Evaluate, Examples) {
  expect_close(evaluate(TrigPoly::constant(2, Complex(2, -1)), std::vector{0.3, 0.7}), Complex(2, -1));
  expect_close(evaluate(TrigPoly::mode({1}), std::vector{0.25}), Complex(0, 1));
  TrigPoly f(1);
  f.add_term({0}, 1.0);
  f.add_term({1}, 1.0);
  expect_close(evaluate(f, std::vector{0.5}), 0.0);
  EXPECT_THROW(evaluate(f, std::vector{0.1, 0.2}), DomainError);
}

TEST(Evaluate, PointEvaluatorAgrees) {
  const TrigPoly f = random_box_poly({3, 2, 4}, 4);
  const PointEvaluator eval(f);
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> x = {rng.uniform(), rng.uniform(), rng.uniform()};
    expect_close(eval(x), evaluate(f, x), 1e-11);
  }
  // Wide spectra use the per-term path.
  TrigPoly g(1);
  g.add_term({100000}, 1.0);
  g.add_term({-3}, Complex(0, 2));
  const PointEvaluator eg(g);
  for (double z : {0.0, 0.1, 0.123456, 0.9}) expect_close(eg(std::vector{z}), evaluate(g, std::vector{z}), 1e-9);
}

TEST(PartialDegree, Examples) {
  TrigPoly f(1);
  f.add_term({3}, 1.0);
  f.add_term({-5}, 1.0);
  EXPECT_EQ(partial_degree(f, 0), 5);
  EXPECT_EQ(centered_degree(f, 0), 4);
  EXPECT_EQ(partial_degree(TrigPoly::constant(3, 1.0), 2), 0);
  TrigPoly g(2);
  g.add_term({1, 4}, 1.0);
  g.add_term({2, -7}, 1.0);
  EXPECT_EQ(partial_degree(g, 1), 7);
  EXPECT_EQ(partial_degree(TrigPoly(2), 0), 0);
}

TEST(PartialDerivative, ExamplesAndFiniteDifferences) {
  expect_close(partial_derivative(TrigPoly::mode({1}), 0).coefficient({1}), Complex(0, kTwoPi));
  EXPECT_TRUE(partial_derivative(TrigPoly::constant(2, 5.0), 1).empty());

  const TrigPoly f = random_box_poly({2, 3}, 17);
  const TrigPoly df = partial_derivative(f, 1);
  Rng rng(2);
  const double h = 1e-5;
  for (int t = 0; t < 1000; ++t) {
    const double y = rng.uniform(), z = rng.uniform();
    const Complex fd = (evaluate(f, std::vector{y, z + h}) - evaluate(f, std::vector{y, z - h})) / (2 * h);
    expect_close(evaluate(df, std::vector{y, z}), fd, 1e-5 * (1 + std::abs(fd)));
  }
}

TEST(ApplyT, Examples) {
  const TrigPoly t1 = apply_T(TrigPoly::mode({1, 1}), FoldingSeq({1, 3}));
  EXPECT_EQ(t1, TrigPoly::mode({4}));
  EXPECT_EQ(apply_T(TrigPoly::constant(2, 1.0), FoldingSeq({1, 3})), TrigPoly::constant(1, 1.0));

  const TrigPoly f = random_box_poly({1, 1}, 5);
  const TrigPoly tf = apply_T(f, FoldingSeq({1, 3}));
  ASSERT_EQ(tf.size(), 9u);
  for (const auto& [lambda, c] : f.coeffs()) {
    EXPECT_EQ(tf.coefficient({lambda[0] + 3 * lambda[1]}), c);
  }
  const auto image = folded_spectrum(BoxSpec({1, 1}), FoldingSeq({1, 3}));
  std::size_t i = 0;
  for (const auto& [beta, c] : tf.coeffs()) EXPECT_EQ(static_cast<Wide>(beta[0]), image[i++]);
}

TEST(ApplyT, StrictRejectsCollisionsMergeSums) {
  TrigPoly f(2);
  f.add_term({-1, 0}, 1.0);
  f.add_term({1, -1}, 2.0);
  EXPECT_THROW(apply_T(f, FoldingSeq({1, 2})), CollisionError);
  const TrigPoly merged = apply_T(f, FoldingSeq({1, 2}), CollisionPolicy::merge);
  EXPECT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged.coefficient({-1}), Complex(3.0));
  EXPECT_THROW(apply_T(f, FoldingSeq({1, 2, 3})), DomainError);
}

TEST(ApplyT, IsCompositionWithTheLine) {
  const FoldingSeq tau({1, 7, -50});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TrigPoly f = random_box_poly({2, 3, 1}, 100 + seed);
    const TrigPoly tf = apply_T(f, tau);
    Rng rng(seed);
    for (int t = 0; t < 1000; ++t) {
      const double z = rng.uniform();
      std::vector<double> x(3);
      for (int k = 0; k < 3; ++k) {
        const double v = std::fmod(static_cast<double>(tau[k]) * z, 1.0);
        x[k] = v < 0 ? v + 1 : v;
      }
      expect_close(evaluate(tf, std::vector{z}), evaluate(f, x), 1e-10);
    }
  }
}

TEST(ApplyT, LinearAndPreservesCoefficientMass) {
  const FoldingSeq tau({1, 4, 20});
  const TrigPoly f = random_box_poly({1, 1, 1}, 1);
  const TrigPoly g = random_box_poly({1, 1, 1}, 2);
  const Complex alpha(0.5, -2);
  const TrigPoly lhs = apply_T(alpha * f + g, tau);
  const TrigPoly rhs = alpha * apply_T(f, tau) + apply_T(g, tau);
  ASSERT_EQ(lhs.size(), rhs.size());
  for (const auto& [beta, c] : lhs.coeffs()) expect_close(c, rhs.coefficient(beta));
  EXPECT_NEAR(coefficient_l1(apply_T(f, tau)), coefficient_l1(f), 1e-12);
}

TEST(ChainPolys, Examples) {
  const TrigPoly f = random_box_poly({2}, 3);
  const auto c1 = chain_polys(f, FoldingSeq({1}));
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_EQ(c1[0], f);

  const auto c2 = chain_polys(TrigPoly::mode({1, 1}), FoldingSeq({1, 5}));
  ASSERT_EQ(c2.size(), 2u);
  EXPECT_EQ(c2[0], TrigPoly::mode({6}));
  EXPECT_EQ(c2[1], TrigPoly::mode({1, 1}));
}

TEST(ChainPolys, EndpointsAndIntermediateFrequencies) {
  const FoldingSeq tau({-1, 4, 30, 300});
  const TrigPoly f = random_box_poly({1, 1, 2, 1}, 9);
  const auto chain = chain_polys(f, tau);
  ASSERT_EQ(chain.size(), 4u);
  EXPECT_EQ(chain[0], apply_T(f, tau));
  // w_n: reversed axes, first axis of f dilated by tau_1.
  TrigPoly expect_wn(4);
  for (const auto& [l, c] : f.coeffs()) expect_wn.add_term({l[3], l[2], l[1], -l[0]}, c);
  EXPECT_EQ(chain[3], expect_wn);
  // w_2: y' = (lambda_4), z = tau_1 l_1 + tau_2 l_2 + tau_3 l_3.
  TrigPoly expect_w2(2);
  for (const auto& [l, c] : f.coeffs()) expect_w2.add_term({l[3], -l[0] + 4 * l[1] + 30 * l[2]}, c);
  EXPECT_EQ(chain[1], expect_w2);
  for (std::size_t d = 0; d < 4; ++d) EXPECT_EQ(chain[d].dim(), d + 1);
}

TEST(PermuteAxes, Basic) {
  TrigPoly f(3);
  f.add_term({1, 2, 3}, 1.0);
  const std::vector<std::size_t> perm = {2, 0, 1};
  EXPECT_EQ(permute_axes(f, perm), TrigPoly::mode({3, 1, 2}));
  const std::vector<std::size_t> bad = {0, 0, 1};
  EXPECT_THROW(permute_axes(f, bad), DomainError);
}

TEST(StepApprox, Examples) {
  const auto sc = step_approx(TrigPoly::constant(2, Complex(1, 1)), 5);
  for (const auto& s : sc.slices()) EXPECT_EQ(s, TrigPoly::constant(1, Complex(1, 1)));

  const auto sa = step_approx(TrigPoly::mode({1}), 4);
  const Complex want[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (int j = 0; j < 4; ++j) {
    ASSERT_EQ(sa.slice(j).dim(), 0u);
    expect_close(sa.slice(j).coefficient({}), want[j]);
  }
  EXPECT_THROW(step_approx(TrigPoly::mode({1}), 0), DomainError);
}

TEST(StepApprox, SlicesReproduceRestrictions) {
  const TrigPoly f = random_box_poly({2, 3, 5}, 12);
  const std::int64_t n = 7;
  const auto sa = step_approx(f, n);
  Rng rng(4);
  for (std::int64_t j = 0; j < n; ++j) {
    for (int t = 0; t < 100; ++t) {
      const std::vector<double> y = {rng.uniform(), rng.uniform()};
      const std::vector<double> x = {y[0], y[1], static_cast<double>(j) / n};
      expect_close(evaluate(sa.slice(j), y), evaluate(f, x), 1e-11);
      // Piecewise constant on [j/N, (j+1)/N).
      const double z = (static_cast<double>(j) + rng.uniform()) / n;
      expect_close(sa.evaluate(y, z), evaluate(sa.slice(j), y));
    }
  }
}

TEST(LiftAndModulate, Construction) {
  const std::vector<TrigPoly> parts = {TrigPoly::mode({2, 1}), TrigPoly::mode({0, -1}, 3.0)};
  const TrigPoly lifted = lift_parts(parts, -1);
  EXPECT_EQ(lifted.coefficient({2, -1, 1}), Complex(1.0));
  EXPECT_EQ(lifted.coefficient({0, 0, -1}), Complex(3.0));
  const TrigPoly mod = modulate_parts(parts, -1, 10);
  EXPECT_EQ(mod.coefficient({2, -9}), Complex(1.0));
  EXPECT_EQ(mod.coefficient({0, -1}), Complex(3.0));
  const std::vector<TrigPoly> mixed = {TrigPoly(1), TrigPoly(2)};
  EXPECT_THROW(lift_parts(mixed, 0), DomainError);
}

TEST(LiftAndModulate, ModulatedIsLiftedOnTheDiagonal) {
  // w_d(y', z) = w_{d+1}(y', N z, z)
  Rng rng(6);
  std::vector<TrigPoly> parts;
  for (int j = 0; j < 4; ++j) parts.push_back(random_poly(BoxSpec({1, 2}), CoefficientDist::gaussian, rng));
  const std::int64_t n = 13;
  const TrigPoly wd = modulate_parts(parts, -2, n);
  const TrigPoly wd1 = lift_parts(parts, -2);
  for (int t = 0; t < 200; ++t) {
    const double y = rng.uniform(), z = rng.uniform();
    const double nz = std::fmod(n * z, 1.0);
    expect_close(evaluate(wd, std::vector{y, z}), evaluate(wd1, std::vector{y, nz, z}), 1e-10);
  }
}
