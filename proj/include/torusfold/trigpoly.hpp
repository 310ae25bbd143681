#pragma once

// Sparse multivariate trigonometric polynomials
//   f(x) = sum_lambda c_lambda exp(2 pi i <lambda, x>),  x in [0,1)^d,
// plus the folding operator, the telescoping chain and step approximations.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "torusfold/spectrum.hpp"

namespace torusfold {

using Complex = std::complex<double>;
using Frequency = std::vector<std::int64_t>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// exp(2 pi i num / den) with the numerator reduced exactly mod den first.
Complex unit_root(Wide num, std::int64_t den);

/// Coefficient map Frequency -> amplitude. Keys all have length dim(); no
/// stored amplitude is exactly zero. dim() == 0 is a scalar.
class TrigPoly {
 public:
  using Map = std::map<Frequency, Complex>;

  TrigPoly() = default;
  explicit TrigPoly(std::size_t dim) : dim_(dim) {}

  static TrigPoly constant(std::size_t dim, Complex c);
  static TrigPoly mode(Frequency lambda, Complex c = 1.0);

  /// Accumulates c into the coefficient at lambda; exact zeros are dropped.
  void add_term(const Frequency& lambda, Complex c);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  const Map& coeffs() const { return coeffs_; }
  Complex coefficient(const Frequency& lambda) const;

  TrigPoly& operator+=(const TrigPoly& other);
  TrigPoly& operator*=(Complex alpha);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator*(Complex alpha, TrigPoly f) { return f *= alpha; }

  bool operator==(const TrigPoly&) const = default;

 private:
  std::size_t dim_ = 0;
  Map coeffs_;
};

Complex evaluate(const TrigPoly& f, std::span<const double> x);

/// Fast repeated evaluation: per-axis power tables when degrees are small,
/// exact per-term phases otherwise.
class PointEvaluator {
 public:
  explicit PointEvaluator(const TrigPoly& f);
  Complex operator()(std::span<const double> x) const;

 private:
  std::size_t dim_;
  std::vector<std::int64_t> freqs_;  // row-major, size() * dim_
  std::vector<Complex> coeffs_;
  std::vector<std::int64_t> lo_, hi_;
  bool tables_ = false;
};

/// max |lambda_axis| over the support; 0 for the zero polynomial.
std::int64_t partial_degree(const TrigPoly& f, std::size_t axis);

/// ceil((max - min) / 2) of lambda_axis over the support: the degree after
/// the best integer recentring, which leaves |f| unchanged.
std::int64_t centered_degree(const TrigPoly& f, std::size_t axis);

TrigPoly partial_derivative(const TrigPoly& f, std::size_t axis);

/// sum |c_lambda|
double coefficient_l1(const TrigPoly& f);

enum class CollisionPolicy { strict, merge };

/// Univariate polynomial with coefficient f^(lambda) at fold(lambda, taus).
/// strict: throws CollisionError unless folding is injective on the smallest
/// box containing the support. merge: colliding coefficients are summed.
TrigPoly apply_T(const TrigPoly& f, const FoldingSeq& taus,
                 CollisionPolicy policy = CollisionPolicy::strict,
                 std::int64_t cap = kDefaultEnumerationCap);

/// [w_1, ..., w_n]. w_d has d axes: y' = (lambda_n, ..., lambda_{n-d+2})
/// followed by z with frequency sum_{j <= n-d+1} tau_j lambda_j.
/// w_1 = Tf; w_n is f with reversed axes and its first axis dilated by tau_1.
std::vector<TrigPoly> chain_polys(const TrigPoly& f, const FoldingSeq& taus,
                                  CollisionPolicy policy = CollisionPolicy::strict,
                                  std::int64_t cap = kDefaultEnumerationCap);

TrigPoly permute_axes(const TrigPoly& f, std::span<const std::size_t> perm);

/// Piecewise-constant approximation in the last variable: slice j is the
/// (d-1)-variate polynomial f(., j/N), obtained by exact substitution.
class StepApprox {
 public:
  StepApprox(TrigPoly base, std::int64_t samples, std::vector<TrigPoly> slices);

  const TrigPoly& base() const { return base_; }
  std::int64_t samples() const { return samples_; }
  const std::vector<TrigPoly>& slices() const { return slices_; }
  const TrigPoly& slice(std::int64_t j) const { return slices_[static_cast<std::size_t>(j)]; }

  /// Value of the step function at (y', z).
  Complex evaluate(std::span<const double> y_prime, double z) const;

 private:
  TrigPoly base_;
  std::int64_t samples_;
  std::vector<TrigPoly> slices_;
};

StepApprox step_approx(const TrigPoly& f, std::int64_t samples);

/// Restriction of the last variable to z = j/N, exact in the phases.
TrigPoly restrict_last(const TrigPoly& f, std::int64_t j, std::int64_t samples);

/// Lemma-2/3 constructions from parts f_l, ..., f_{l+m-1} of dimension d:
///   lift:     sum_j e^{2 pi i j y} f_j(y', z), new axis y inserted before z
///   modulate: sum_j e^{2 pi i N j z} f_j(y', z)
TrigPoly lift_parts(std::span<const TrigPoly> parts, std::int64_t first_offset);
TrigPoly modulate_parts(std::span<const TrigPoly> parts, std::int64_t first_offset,
                        std::int64_t modulus);

// ---------------------------------------------------------------------------
// Literal format: one term per line, "l_1 ... l_d : re im". Lines starting
// with '#' are comments, except "# dim D" which pins the dimension (needed for
// the zero polynomial). Doubles are written in shortest round-trip form.

std::string format_poly(const TrigPoly& f);
TrigPoly parse_poly(std::string_view text, std::optional<std::size_t> dim = std::nullopt);
TrigPoly read_poly_file(const std::string& path);
void write_poly_file(const std::string& path, const TrigPoly& f);

}  // namespace torusfold
