#pragma once

// Certified L1 norms on the torus via product-grid rectangle rules, and a
// Monte Carlo estimate used as an independent check.
//
// Certification: along one axis, |f| restricted to a line is an L1 function
// g with TV(g') <= 2||f''||_1 <= 2 (c_B s)^2 ||g||_1, where s is the centred
// degree along the axis. The periodic N-point rectangle rule misses the line
// integral by at most TV(g') / (16 N^2) (Peano kernel B_2/2, half-range 1/16),
// i.e. by r = (c_B s / N)^2 / 8 relative. Iterating over the
// axes, grid value v satisfies prod(1 - r_k) ||f|| <= v <= prod(1 + r_k) ||f||.

#include <cstdint>
#include <span>
#include <vector>

#include "torusfold/trigpoly.hpp"

namespace torusfold {

struct NormOptions {
  double bernstein_constant = kTwoPi;
  double max_grid_points = 8.0e9;
};

struct NormEstimate {
  double value = 0.0;
  double rel_error = 0.0;
  std::vector<std::int64_t> grid;
  double bernstein_constant = kTwoPi;

  /// The true norm lies in [lower(), upper()].
  double lower() const { return value / (1.0 + rel_error); }
  double upper() const { return value * (1.0 + rel_error); }
};

/// Per-axis relative radius (c_B s / N)^2 / 8.
double rectangle_rule_radius(std::int64_t degree, std::int64_t samples, double bernstein_constant);

/// 1 / prod(1 - r_k) - 1, or +inf if some r_k >= 1.
double certified_rel_error(std::span<const std::int64_t> degrees,
                           std::span<const std::int64_t> samples, double bernstein_constant);

/// Smallest per-axis sample counts meeting rel_error <= eps (even split of
/// the budget over axes of nonzero degree). Throws BudgetExceeded when the
/// product exceeds opts.max_grid_points.
std::vector<std::int64_t> certified_grid(const TrigPoly& f, double eps,
                                         const NormOptions& opts = {});

/// Same rule from centred degrees alone.
std::vector<std::int64_t> certified_grid_for(std::span<const std::int64_t> degrees, double eps,
                                             const NormOptions& opts = {});

/// Grid mean of |f| on a caller-chosen grid, with its certified radius.
NormEstimate l1_on_grid(const TrigPoly& f, std::span<const std::int64_t> samples,
                        const NormOptions& opts = {});

NormEstimate l1_certified(const TrigPoly& f, double eps, const NormOptions& opts = {});

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Mean of |f| at uniform random points. Deterministic for a fixed seed and
/// independent of the thread count (per-block seeds, ordered combination).
MonteCarloEstimate l1_monte_carlo(const TrigPoly& f, std::int64_t samples, std::uint64_t seed);

/// Norm of the step function: (1/N) sum_j ||slice_j||, slices certified at
/// eps each. rel_error is the largest slice radius.
NormEstimate step_norm(const StepApprox& sa, double eps, const NormOptions& opts = {});

}  // namespace torusfold
