#pragma once

// Data-parallel kernels and the serial references they are tested against.
// Callers are expected to have validated shapes and caps already.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "torusfold/spectrum.hpp"

namespace torusfold {
class TrigPoly;
}

namespace torusfold::kernels {

using IndexPair = std::pair<std::int64_t, std::int64_t>;

/// Lexicographic rank -> box element.
std::vector<std::int64_t> decode_box_index(const BoxSpec& spec, std::int64_t rank);

/// Folds of every box element, in lexicographic order. OpenMP over chunks.
std::vector<Wide> box_folds(const BoxSpec& spec, const FoldingSeq& taus);

/// Colliding rank pairs (i < j), sorted; sort-and-group over box_folds.
std::vector<IndexPair> collision_pairs(const BoxSpec& spec, const FoldingSeq& taus,
                                       std::size_t max_pairs);
bool collision_free(const BoxSpec& spec, const FoldingSeq& taus);

/// Serial O(|F|^2) all-pairs scan. Reference only.
std::vector<IndexPair> collision_pairs_reference(const BoxSpec& spec, const FoldingSeq& taus,
                                                 std::size_t max_pairs);

/// Mean of |f| over the product grid {(i_1/N_1, ..., i_d/N_d)}.
/// Restriction tree over the leading axes, FFT along the last axis, OpenMP
/// over the outermost loop, slab partials reduced pairwise in fixed order.
double grid_mean_abs(const TrigPoly& f, std::span<const std::int64_t> samples);

/// Same quantity by direct per-point evaluation. Serial reference only.
double grid_mean_abs_reference(const TrigPoly& f, std::span<const std::int64_t> samples);

/// Fixed-order pairwise sum.
double pairwise_sum(std::span<const double> values);

}  // namespace torusfold::kernels
