#include "torusfold/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "torusfold/error.hpp"
#include "torusfold/kernels.hpp"

namespace torusfold {

namespace {

void check_cap(const BoxSpec& spec, std::int64_t cap) {
  const Wide card = spec.cardinality();
  if (card > cap) {
    throw CapExceeded("box cardinality " + to_string(card) + " exceeds enumeration cap " +
                      std::to_string(cap));
  }
}

// Neumaier summation; the tail sums have at most a few hundred terms.
struct Compensated {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

double wide_ratio(Wide num, Wide den) {
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

}  // namespace

MultiIndex::MultiIndex(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("MultiIndex must have length >= 1");
}

std::string to_string(const MultiIndex& m) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k) os << ',';
    os << m[k];
  }
  os << ')';
  return os.str();
}

BoxSpec::BoxSpec(std::vector<std::int64_t> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw DomainError("BoxSpec needs at least one axis");
  for (auto a : bounds_) {
    if (a < 0) throw DomainError("box bounds must be >= 0, got " + std::to_string(a));
    if (a > (std::int64_t{1} << 61)) throw DomainError("box bound too large");
  }
}

Wide BoxSpec::cardinality() const {
  Wide card = 1;
  for (auto a : bounds_) card = checked_mul(card, 2 * static_cast<Wide>(a) + 1);
  return card;
}

bool BoxSpec::contains(std::span<const std::int64_t> lambda) const {
  if (lambda.size() != bounds_.size()) return false;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    if (lambda[k] < -bounds_[k] || lambda[k] > bounds_[k]) return false;
  }
  return true;
}

FoldingSeq::FoldingSeq(std::vector<std::int64_t> taus) : taus_(std::move(taus)) {
  if (taus_.empty()) throw DomainError("folding sequence is empty");
  for (std::size_t k = 0; k < taus_.size(); ++k) {
    if (taus_[k] == 0) {
      throw DomainError("tau_" + std::to_string(k + 1) + " is zero");
    }
    if (taus_[k] == std::numeric_limits<std::int64_t>::min()) {
      throw DomainError("tau_" + std::to_string(k + 1) + " out of range");
    }
  }
}

void require_same_length(const BoxSpec& spec, const FoldingSeq& taus) {
  if (spec.size() != taus.size()) {
    throw DomainError("length mismatch: box has " + std::to_string(spec.size()) +
                      " axes, tau has " + std::to_string(taus.size()));
  }
}

void for_each_in_box(const BoxSpec& spec, std::int64_t cap,
                     const std::function<void(std::span<const std::int64_t>)>& visit) {
  check_cap(spec, cap);
  const std::size_t n = spec.size();
  std::vector<std::int64_t> lambda(n);
  for (std::size_t k = 0; k < n; ++k) lambda[k] = -spec.bound(k);
  while (true) {
    visit(lambda);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (lambda[k] < spec.bound(k)) {
        ++lambda[k];
        break;
      }
      lambda[k] = -spec.bound(k);
      if (k == 0) return;
    }
  }
}

std::vector<MultiIndex> enumerate_box(const BoxSpec& spec, std::int64_t cap) {
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(std::min<Wide>(spec.cardinality(), cap)));
  for_each_in_box(spec, cap, [&](std::span<const std::int64_t> lambda) {
    out.emplace_back(std::vector<std::int64_t>(lambda.begin(), lambda.end()));
  });
  return out;
}

Wide fold(std::span<const std::int64_t> lambda, const FoldingSeq& taus) {
  if (lambda.size() != taus.size()) {
    throw DomainError("length mismatch: lambda has " + std::to_string(lambda.size()) +
                      " entries, tau has " + std::to_string(taus.size()));
  }
  Wide acc = 0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    acc = checked_add(acc, checked_mul(taus[k], lambda[k]));
  }
  return acc;
}

AdmissibilityReport check_admissibility(const BoxSpec& spec, const FoldingSeq& taus) {
  require_same_length(spec, taus);
  const std::size_t n = spec.size();
  AdmissibilityReport report;
  report.growth_ok.resize(n - 1);
  Compensated tail;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Wide need = checked_mul(checked_mul(3, spec.bound(k)), wide_abs(taus[k]));
    report.growth_ok[k] = static_cast<Wide>(taus[k + 1]) >= need;
    const Wide num =
        checked_mul(checked_mul(spec.bound(k), wide_abs(taus[k])), spec.bound(k + 1));
    tail.add(wide_ratio(num, wide_abs(taus[k + 1])));
  }
  report.tail_sum = tail.value();
  report.overall_ok =
      std::all_of(report.growth_ok.begin(), report.growth_ok.end(), [](bool b) { return b; });
  return report;
}

std::vector<CollisionPair> collision_scan(const BoxSpec& spec, const FoldingSeq& taus,
                                          std::int64_t cap, std::size_t max_pairs) {
  require_same_length(spec, taus);
  check_cap(spec, cap);
  const auto ranks = kernels::collision_pairs(spec, taus, max_pairs);
  std::vector<CollisionPair> out;
  out.reserve(ranks.size());
  for (const auto& [i, j] : ranks) {
    out.emplace_back(MultiIndex(kernels::decode_box_index(spec, i)),
                     MultiIndex(kernels::decode_box_index(spec, j)));
  }
  return out;
}

bool is_collision_free(const BoxSpec& spec, const FoldingSeq& taus, std::int64_t cap) {
  require_same_length(spec, taus);
  check_cap(spec, cap);
  return kernels::collision_free(spec, taus);
}

std::vector<Wide> folded_spectrum(const BoxSpec& spec, const FoldingSeq& taus,
                                  std::int64_t cap) {
  require_same_length(spec, taus);
  check_cap(spec, cap);
  auto folds = kernels::box_folds(spec, taus);
  std::sort(folds.begin(), folds.end());
  folds.erase(std::unique(folds.begin(), folds.end()), folds.end());
  return folds;
}

FoldingSeq suggest_tau(const BoxSpec& spec, double target_tail) {
  if (!(target_tail > 0.0) || !std::isfinite(target_tail)) {
    throw DomainError("target tail must be a positive finite number");
  }
  const std::size_t n = spec.size();
  std::size_t links = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (spec.bound(k) > 0 && spec.bound(k + 1) > 0) ++links;
  }
  const long double share =
      links ? static_cast<long double>(target_tail) / static_cast<long double>(links) : 1.0L;

  std::vector<std::int64_t> taus(n);
  taus[0] = 1;
  Wide weighted = 0;  // sum_{j<=k} a_j |tau_j|
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Wide ak = spec.bound(k);
    const Wide next_a = spec.bound(k + 1);
    weighted = checked_add(weighted, checked_mul(ak, taus[k]));
    Wide need = checked_mul(checked_mul(3, ak), taus[k]);
    need = std::max(need, checked_add(checked_mul(2, weighted), 1));
    const Wide num = checked_mul(checked_mul(ak, taus[k]), next_a);
    if (num > 0) {
      auto q = static_cast<Wide>(std::ceil(static_cast<long double>(num) / share));
      while (static_cast<long double>(num) / static_cast<long double>(q) > share) ++q;
      need = std::max(need, q);
    }
    if (!fits_int64(need)) {
      throw OverflowError("suggest_tau: tau_" + std::to_string(k + 2) +
                          " exceeds 64-bit range");
    }
    taus[k + 1] = static_cast<std::int64_t>(need);
  }

  // The floating tail may round above the target by an ulp; nudge the
  // largest term's denominator until the reported value is within target.
  for (int guard = 0; guard < 64; ++guard) {
    FoldingSeq seq(taus);
    const auto report = check_admissibility(spec, seq);
    if (report.tail_sum <= target_tail) return seq;
    std::size_t worst = 1;
    long double worst_term = -1.0L;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const long double term = static_cast<long double>(spec.bound(k)) * taus[k] *
                               spec.bound(k + 1) / static_cast<long double>(taus[k + 1]);
      if (term > worst_term) {
        worst_term = term;
        worst = k + 1;
      }
    }
    if (taus[worst] == std::numeric_limits<std::int64_t>::max()) break;
    ++taus[worst];
  }
  throw OverflowError("suggest_tau: could not meet target tail within 64-bit range");
}

BoxSpec bounding_box(std::span<const std::vector<std::int64_t>> freqs, std::size_t n) {
  std::vector<std::int64_t> bounds(n, 0);
  for (const auto& lambda : freqs) {
    if (lambda.size() != n) throw DomainError("bounding_box: inconsistent lengths");
    for (std::size_t k = 0; k < n; ++k) {
      if (lambda[k] == std::numeric_limits<std::int64_t>::min()) {
        throw OverflowError("bounding_box: frequency out of range");
      }
      bounds[k] = std::max(bounds[k], lambda[k] < 0 ? -lambda[k] : lambda[k]);
    }
  }
  return BoxSpec(std::move(bounds));
}

}  // namespace torusfold
