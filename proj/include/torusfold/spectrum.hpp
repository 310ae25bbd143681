#pragma once

// Integer layer: multi-indices, box spectra, folding sequences, the fold map
// and admissibility diagnostics. All arithmetic here is exact.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torusfold/wide.hpp"

namespace torusfold {

inline constexpr std::int64_t kDefaultEnumerationCap = 10'000'000;

/// Integer frequency vector, length >= 1.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<std::int64_t> entries);

  std::size_t size() const { return entries_.size(); }
  std::int64_t operator[](std::size_t k) const { return entries_[k]; }
  std::span<const std::int64_t> entries() const { return entries_; }
  const std::vector<std::int64_t>& vec() const { return entries_; }

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<std::int64_t> entries_;
};

std::string to_string(const MultiIndex& m);

/// Per-axis degree caps a_1..a_n; the box F is {lambda : |lambda_k| <= a_k}.
class BoxSpec {
 public:
  explicit BoxSpec(std::vector<std::int64_t> bounds);

  std::size_t size() const { return bounds_.size(); }
  std::int64_t bound(std::size_t k) const { return bounds_[k]; }
  std::span<const std::int64_t> bounds() const { return bounds_; }

  /// prod_k (2 a_k + 1), exact; throws OverflowError past 127 bits.
  Wide cardinality() const;
  bool contains(std::span<const std::int64_t> lambda) const;

 private:
  std::vector<std::int64_t> bounds_;
};

/// Nonzero integers tau_1..tau_n.
class FoldingSeq {
 public:
  explicit FoldingSeq(std::vector<std::int64_t> taus);

  std::size_t size() const { return taus_.size(); }
  std::int64_t operator[](std::size_t k) const { return taus_[k]; }
  std::span<const std::int64_t> taus() const { return taus_; }

 private:
  std::vector<std::int64_t> taus_;
};

struct AdmissibilityReport {
  /// growth_ok[k] refers to the pair (tau_{k+1}, tau_{k+2}) in 1-based terms,
  /// i.e. tau[k+1] >= 3 a[k] |tau[k]| with 0-based storage; size n-1.
  std::vector<bool> growth_ok;
  double tail_sum = 0.0;
  bool overall_ok = true;
};

void require_same_length(const BoxSpec& spec, const FoldingSeq& taus);

/// Calls visit(lambda) for every box element in lexicographic order.
void for_each_in_box(const BoxSpec& spec, std::int64_t cap,
                     const std::function<void(std::span<const std::int64_t>)>& visit);

std::vector<MultiIndex> enumerate_box(const BoxSpec& spec,
                                      std::int64_t cap = kDefaultEnumerationCap);

/// Exact sum_k tau_k lambda_k.
Wide fold(std::span<const std::int64_t> lambda, const FoldingSeq& taus);
inline Wide fold(const MultiIndex& lambda, const FoldingSeq& taus) {
  return fold(lambda.entries(), taus);
}

AdmissibilityReport check_admissibility(const BoxSpec& spec, const FoldingSeq& taus);

using CollisionPair = std::pair<MultiIndex, MultiIndex>;

/// Every unordered pair lambda != mu in F with equal folds, each pair stored
/// with first < second, the list sorted. Stops after max_pairs pairs.
std::vector<CollisionPair> collision_scan(const BoxSpec& spec, const FoldingSeq& taus,
                                          std::int64_t cap = kDefaultEnumerationCap,
                                          std::size_t max_pairs = SIZE_MAX);

bool is_collision_free(const BoxSpec& spec, const FoldingSeq& taus,
                       std::int64_t cap = kDefaultEnumerationCap);

/// Sorted, deduplicated image of F under fold.
std::vector<Wide> folded_spectrum(const BoxSpec& spec, const FoldingSeq& taus,
                                  std::int64_t cap = kDefaultEnumerationCap);

/// Heuristic admissible sequence with tau_1 = 1 and tail_sum <= target_tail.
FoldingSeq suggest_tau(const BoxSpec& spec, double target_tail);

/// Smallest box containing the given frequency vectors (all of length n).
BoxSpec bounding_box(std::span<const std::vector<std::int64_t>> freqs, std::size_t n);

}  // namespace torusfold
