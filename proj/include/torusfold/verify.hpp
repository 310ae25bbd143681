#pragma once

// Numerical checks of the slab, lifting and modulation estimates and of the
// telescoping chain behind the norm equivalence ||Tf|| ~ ||f||.
// Every check reports the measured side, the bound, and a tolerance built
// from the certified radii of the norms involved.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torusfold/norms.hpp"
#include "torusfold/spectrum.hpp"
#include "torusfold/trigpoly.hpp"

namespace torusfold {

struct LemmaCheck {
  double measured_lhs = 0.0;
  double bound_rhs = 0.0;
  double slack = 0.0;  // bound_rhs - measured_lhs
  double tolerance = 0.0;
  bool passed = false;
  bool vacuous = false;
  std::vector<std::pair<std::string, double>> context;

  double get(const std::string& key) const;
};

/// |‖f‖ - ‖f~‖| <= c s / N ‖f‖ with f~ the step approximation in the last
/// variable and s its degree there. `bound_constant` is c in the bound;
/// certification always uses opts.bernstein_constant.
LemmaCheck lemma1_check(const TrigPoly& f, std::int64_t samples, double eps,
                        double bound_constant = kTwoPi, const NormOptions& opts = {});

struct Lemma2Result {
  LemmaCheck upper;  // ‖w‖ <= sum ‖f_j‖
  LemmaCheck lower;  // sum ‖f_j‖ <= count ‖w‖
};

/// w(y', y, z) = sum_j e^{2 pi i j y} f_j(y', z), j = first_offset, ...
Lemma2Result lemma2_check(std::span<const TrigPoly> parts, std::int64_t first_offset, double eps,
                          const NormOptions& opts = {});

struct Lemma3Result {
  LemmaCheck tight;  // factor 2 (count - 1) s / N
  LemmaCheck loose;  // factor 2 count s / N
  double norm_modulated = 0.0;  // ‖w_d‖
  double norm_lifted = 0.0;     // ‖w_{d+1}‖
  // Exact identity between the step-function versions, by two routes.
  double identity_step_modulated = 0.0;  // direct pointwise evaluation
  double identity_step_lifted = 0.0;     // certified norms of lifted slices
  double identity_residual = 0.0;
  double identity_tolerance = 0.0;
  bool identity_passed = false;
};

/// w_d = sum_j e^{2 pi i N j z} f_j, w_{d+1} = lift of the same parts.
Lemma3Result lemma3_check(std::span<const TrigPoly> parts, std::int64_t samples,
                          std::int64_t first_offset, double eps, const NormOptions& opts = {});

/// K(d) = 4 a_{n-d+1} (sum_{j <= n-d} a_j |tau_j|) / |tau_{n-d+1}| as an exact
/// fraction, d = 1..n-1.
struct KFactor {
  Wide numerator = 0;
  Wide denominator = 1;
  double value() const;
};
std::vector<KFactor> chain_k_factors(const BoxSpec& spec, const FoldingSeq& taus);

struct ChainStep {
  std::size_t d = 0;     // compares w_d with w_{d+1}
  double lhs = 0.0;      // |‖w_d‖ - ‖w_{d+1}‖|
  double rhs = 0.0;      // K(d) ‖w_{d+1}‖
  double tolerance = 0.0;
  bool passed = false;
};

struct ChainReport {
  std::size_t n = 0;
  double eps = 0.0;
  std::vector<NormEstimate> norms;  // ‖w_1‖ .. ‖w_n‖
  NormEstimate f_norm;
  std::vector<KFactor> kds;
  std::vector<double> k_values;
  double lower = 1.0;  // prod (1 - K)
  double upper = 1.0;  // prod (1 + K)
  double ratio = 1.0;  // ‖Tf‖ / ‖f‖
  double tolerance = 0.0;  // on the ratio, 3 eps
  double k_final = 1.0;    // max(upper, 1/lower), +inf if lower <= 0
  bool vacuous = false;    // some K(d) >= 1
  bool ratio_ok = false;
  bool steps_ok = false;
  std::vector<ChainStep> steps;
  double wn_residual = 0.0;  // |‖w_n‖/‖f‖ - 1|
  bool wn_ok = false;
  bool weak_bound_ok = false;  // k_final <= exp(sum 2 K(d))
  bool passed = false;
};

/// Runs the whole chain for f with spectrum inside the box. Throws DomainError
/// on non-admissible sequences or support outside the box and CollisionError
/// if folding is not injective on the box.
ChainReport theorem_chain(const TrigPoly& f, const BoxSpec& spec, const FoldingSeq& taus,
                          double eps, const NormOptions& opts = {},
                          std::int64_t cap = kDefaultEnumerationCap);

}  // namespace torusfold
