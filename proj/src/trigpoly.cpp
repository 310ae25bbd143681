#include "torusfold/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "torusfold/error.hpp"
#include "torusfold/kernels.hpp"

namespace torusfold {

namespace {

struct ComplexSum {
  double re = 0, im = 0, cre = 0, cim = 0;
  static void step(double& s, double& c, double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  void add(Complex z) {
    step(re, cre, z.real());
    step(im, cim, z.imag());
  }
  Complex value() const { return {re + cre, im + cim}; }
};

long double frac(long double t) { return t - std::floor(t); }

Complex phase_of(long double turns) {
  const long double angle = 2.0L * 3.14159265358979323846264338327950288L * frac(turns);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

void require_axis(const TrigPoly& f, std::size_t axis) {
  if (axis >= f.dim()) {
    throw DomainError("axis " + std::to_string(axis) + " out of range for dimension " +
                      std::to_string(f.dim()));
  }
}

}  // namespace

Complex unit_root(Wide num, std::int64_t den) {
  Wide r = num % den;
  if (r < 0) r += den;
  if (2 * r > den) r -= den;  // symmetric residue keeps the angle small
  const long double angle = 2.0L * 3.14159265358979323846264338327950288L *
                            static_cast<long double>(r) / static_cast<long double>(den);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

TrigPoly TrigPoly::constant(std::size_t dim, Complex c) {
  TrigPoly f(dim);
  f.add_term(Frequency(dim, 0), c);
  return f;
}

TrigPoly TrigPoly::mode(Frequency lambda, Complex c) {
  TrigPoly f(lambda.size());
  f.add_term(lambda, c);
  return f;
}

void TrigPoly::add_term(const Frequency& lambda, Complex c) {
  if (lambda.size() != dim_) {
    throw DomainError("frequency of length " + std::to_string(lambda.size()) +
                      " added to a polynomial of dimension " + std::to_string(dim_));
  }
  if (c == Complex(0.0)) return;
  auto [it, inserted] = coeffs_.try_emplace(lambda, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) coeffs_.erase(it);
  }
}

Complex TrigPoly::coefficient(const Frequency& lambda) const {
  auto it = coeffs_.find(lambda);
  return it == coeffs_.end() ? Complex(0.0) : it->second;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& other) {
  if (other.dim_ != dim_) throw DomainError("adding polynomials of different dimension");
  for (const auto& [lambda, c] : other.coeffs_) add_term(lambda, c);
  return *this;
}

TrigPoly& TrigPoly::operator*=(Complex alpha) {
  if (alpha == Complex(0.0)) {
    coeffs_.clear();
    return *this;
  }
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it->second *= alpha;
    it = it->second == Complex(0.0) ? coeffs_.erase(it) : std::next(it);
  }
  return *this;
}

Complex evaluate(const TrigPoly& f, std::span<const double> x) {
  if (x.size() != f.dim()) {
    throw DomainError("point of length " + std::to_string(x.size()) +
                      " for a polynomial of dimension " + std::to_string(f.dim()));
  }
  ComplexSum acc;
  for (const auto& [lambda, c] : f.coeffs()) {
    long double turns = 0;
    for (std::size_t k = 0; k < lambda.size(); ++k) {
      turns += frac(static_cast<long double>(lambda[k]) * static_cast<long double>(x[k]));
    }
    acc.add(c * phase_of(turns));
  }
  return acc.value();
}

PointEvaluator::PointEvaluator(const TrigPoly& f)
    : dim_(f.dim()), lo_(f.dim(), 0), hi_(f.dim(), 0) {
  freqs_.reserve(f.size() * dim_);
  coeffs_.reserve(f.size());
  for (const auto& [lambda, c] : f.coeffs()) {
    freqs_.insert(freqs_.end(), lambda.begin(), lambda.end());
    coeffs_.push_back(c);
    for (std::size_t k = 0; k < dim_; ++k) {
      lo_[k] = std::min(lo_[k], lambda[k]);
      hi_[k] = std::max(hi_[k], lambda[k]);
    }
  }
  tables_ = true;
  for (std::size_t k = 0; k < dim_; ++k) {
    if (hi_[k] - lo_[k] > 4096) tables_ = false;
  }
}

Complex PointEvaluator::operator()(std::span<const double> x) const {
  if (x.size() != dim_) throw DomainError("PointEvaluator: dimension mismatch");
  ComplexSum acc;
  if (!tables_) {
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
      long double turns = 0;
      for (std::size_t k = 0; k < dim_; ++k) {
        turns += frac(static_cast<long double>(freqs_[t * dim_ + k]) * x[k]);
      }
      acc.add(coeffs_[t] * phase_of(turns));
    }
    return acc.value();
  }
  // powers[k][v - lo_k] = e^{2 pi i v x_k}
  std::vector<std::vector<Complex>> powers(dim_);
  for (std::size_t k = 0; k < dim_; ++k) {
    const Complex base = phase_of(x[k]);
    auto& row = powers[k];
    row.resize(static_cast<std::size_t>(hi_[k] - lo_[k] + 1));
    const std::int64_t zero = -lo_[k];
    row[zero] = 1.0;
    for (std::int64_t v = 1; v <= hi_[k]; ++v) row[zero + v] = row[zero + v - 1] * base;
    const Complex inv = std::conj(base);
    for (std::int64_t v = 1; v <= -lo_[k]; ++v) row[zero - v] = row[zero - v + 1] * inv;
  }
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    Complex term = coeffs_[t];
    for (std::size_t k = 0; k < dim_; ++k) term *= powers[k][freqs_[t * dim_ + k] - lo_[k]];
    acc.add(term);
  }
  return acc.value();
}

std::int64_t partial_degree(const TrigPoly& f, std::size_t axis) {
  require_axis(f, axis);
  std::int64_t deg = 0;
  for (const auto& [lambda, c] : f.coeffs()) {
    deg = std::max(deg, lambda[axis] < 0 ? -lambda[axis] : lambda[axis]);
  }
  return deg;
}

std::int64_t centered_degree(const TrigPoly& f, std::size_t axis) {
  require_axis(f, axis);
  if (f.empty()) return 0;
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& [lambda, c] : f.coeffs()) {
    lo = std::min(lo, lambda[axis]);
    hi = std::max(hi, lambda[axis]);
  }
  const Wide width = static_cast<Wide>(hi) - lo;
  return narrow_int64((width + 1) / 2);
}

TrigPoly partial_derivative(const TrigPoly& f, std::size_t axis) {
  require_axis(f, axis);
  TrigPoly out(f.dim());
  for (const auto& [lambda, c] : f.coeffs()) {
    if (lambda[axis] == 0) continue;
    out.add_term(lambda, c * Complex(0.0, kTwoPi * static_cast<double>(lambda[axis])));
  }
  return out;
}

double coefficient_l1(const TrigPoly& f) {
  double total = 0;
  for (const auto& [lambda, c] : f.coeffs()) total += std::abs(c);
  return total;
}

namespace {

void require_injective(const TrigPoly& f, const FoldingSeq& taus, std::int64_t cap) {
  std::vector<Frequency> support;
  support.reserve(f.size());
  for (const auto& [lambda, c] : f.coeffs()) support.push_back(lambda);
  const BoxSpec box = bounding_box(support, f.dim());
  if (box.cardinality() <= cap) {
    if (!kernels::collision_free(box, taus)) {
      throw CollisionError("folding is not injective on the box " +
                           to_string(MultiIndex(std::vector<std::int64_t>(
                               box.bounds().begin(), box.bounds().end()))) +
                           " containing the support");
    }
    return;
  }
  // Box too large to scan: fall back to the support itself.
  std::vector<Wide> folds;
  folds.reserve(support.size());
  for (const auto& lambda : support) folds.push_back(fold(lambda, taus));
  std::sort(folds.begin(), folds.end());
  if (std::adjacent_find(folds.begin(), folds.end()) != folds.end()) {
    throw CollisionError("folding is not injective on the support");
  }
}

}  // namespace

TrigPoly apply_T(const TrigPoly& f, const FoldingSeq& taus, CollisionPolicy policy,
                 std::int64_t cap) {
  if (f.dim() != taus.size()) {
    throw DomainError("apply_T: polynomial has dimension " + std::to_string(f.dim()) +
                      ", tau has length " + std::to_string(taus.size()));
  }
  if (policy == CollisionPolicy::strict && !f.empty()) require_injective(f, taus, cap);
  TrigPoly out(1);
  for (const auto& [lambda, c] : f.coeffs()) {
    out.add_term({narrow_int64(fold(lambda, taus))}, c);
  }
  return out;
}

std::vector<TrigPoly> chain_polys(const TrigPoly& f, const FoldingSeq& taus,
                                  CollisionPolicy policy, std::int64_t cap) {
  const std::size_t n = f.dim();
  if (n != taus.size()) {
    throw DomainError("chain_polys: polynomial has dimension " + std::to_string(n) +
                      ", tau has length " + std::to_string(taus.size()));
  }
  if (policy == CollisionPolicy::strict && !f.empty()) require_injective(f, taus, cap);

  std::vector<TrigPoly> chain;
  chain.reserve(n);
  for (std::size_t d = 1; d <= n; ++d) {
    TrigPoly w(d);
    const std::size_t folded = n - d + 1;  // axes 0..folded-1 feed z
    for (const auto& [lambda, c] : f.coeffs()) {
      Frequency key(d);
      for (std::size_t i = 0; i + 1 < d; ++i) key[i] = lambda[n - 1 - i];
      Wide z = 0;
      for (std::size_t j = 0; j < folded; ++j) {
        z = checked_add(z, checked_mul(taus[j], lambda[j]));
      }
      key[d - 1] = narrow_int64(z);
      w.add_term(key, c);
    }
    chain.push_back(std::move(w));
  }
  return chain;
}

TrigPoly permute_axes(const TrigPoly& f, std::span<const std::size_t> perm) {
  if (perm.size() != f.dim()) throw DomainError("permute_axes: permutation length mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) throw DomainError("permute_axes: not a permutation");
    seen[p] = true;
  }
  TrigPoly out(f.dim());
  for (const auto& [lambda, c] : f.coeffs()) {
    Frequency key(lambda.size());
    for (std::size_t k = 0; k < perm.size(); ++k) key[k] = lambda[perm[k]];
    out.add_term(key, c);
  }
  return out;
}

StepApprox::StepApprox(TrigPoly base, std::int64_t samples, std::vector<TrigPoly> slices)
    : base_(std::move(base)), samples_(samples), slices_(std::move(slices)) {
  if (samples_ < 1) throw DomainError("step approximation needs N >= 1");
  if (slices_.size() != static_cast<std::size_t>(samples_)) {
    throw DomainError("step approximation: slice count != N");
  }
}

Complex StepApprox::evaluate(std::span<const double> y_prime, double z) const {
  auto j = static_cast<std::int64_t>(std::floor(z * static_cast<double>(samples_)));
  j %= samples_;
  if (j < 0) j += samples_;
  return torusfold::evaluate(slices_[static_cast<std::size_t>(j)], y_prime);
}

TrigPoly restrict_last(const TrigPoly& f, std::int64_t j, std::int64_t samples) {
  if (f.dim() == 0) throw DomainError("cannot restrict a scalar");
  if (samples < 1) throw DomainError("restrict_last needs N >= 1");
  TrigPoly out(f.dim() - 1);
  for (const auto& [lambda, c] : f.coeffs()) {
    Frequency key(lambda.begin(), lambda.end() - 1);
    out.add_term(key, c * unit_root(checked_mul(lambda.back(), j), samples));
  }
  return out;
}

StepApprox step_approx(const TrigPoly& f, std::int64_t samples) {
  if (samples < 1) throw DomainError("step approximation needs N >= 1");
  if (f.dim() == 0) throw DomainError("step approximation needs dimension >= 1");
  std::vector<TrigPoly> slices;
  slices.reserve(static_cast<std::size_t>(samples));
  for (std::int64_t j = 0; j < samples; ++j) slices.push_back(restrict_last(f, j, samples));
  return StepApprox(f, samples, std::move(slices));
}

namespace {

std::size_t common_dim(std::span<const TrigPoly> parts) {
  if (parts.empty()) throw DomainError("need at least one part");
  const std::size_t d = parts.front().dim();
  if (d == 0) throw DomainError("parts must have dimension >= 1");
  for (const auto& p : parts) {
    if (p.dim() != d) throw DomainError("parts must share a dimension");
  }
  return d;
}

}  // namespace

TrigPoly lift_parts(std::span<const TrigPoly> parts, std::int64_t first_offset) {
  const std::size_t d = common_dim(parts);
  TrigPoly out(d + 1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::int64_t j = first_offset + static_cast<std::int64_t>(i);
    for (const auto& [lambda, c] : parts[i].coeffs()) {
      Frequency key(lambda.begin(), lambda.end() - 1);
      key.push_back(j);
      key.push_back(lambda.back());
      out.add_term(key, c);
    }
  }
  return out;
}

TrigPoly modulate_parts(std::span<const TrigPoly> parts, std::int64_t first_offset,
                        std::int64_t modulus) {
  const std::size_t d = common_dim(parts);
  TrigPoly out(d);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::int64_t j = first_offset + static_cast<std::int64_t>(i);
    const Wide shift = checked_mul(modulus, j);
    for (const auto& [lambda, c] : parts[i].coeffs()) {
      Frequency key = lambda;
      key.back() = narrow_int64(checked_add(shift, lambda.back()));
      out.add_term(key, c);
    }
  }
  return out;
}

}  // namespace torusfold
