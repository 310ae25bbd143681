#include <algorithm>
#include <numeric>

#include <omp.h>

#include "torusfold/kernels.hpp"

namespace torusfold::kernels {

std::vector<std::int64_t> decode_box_index(const BoxSpec& spec, std::int64_t rank) {
  const std::size_t n = spec.size();
  std::vector<std::int64_t> lambda(n);
  for (std::size_t k = n; k-- > 0;) {
    const std::int64_t width = 2 * spec.bound(k) + 1;
    lambda[k] = rank % width - spec.bound(k);
    rank /= width;
  }
  return lambda;
}

std::vector<Wide> box_folds(const BoxSpec& spec, const FoldingSeq& taus) {
  const std::size_t n = spec.size();
  const auto total = static_cast<std::int64_t>(spec.cardinality());

  // contribution[k][v] = tau_k * (v - a_k), so a fold is a sum of n lookups
  std::vector<std::vector<Wide>> contribution(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::int64_t width = 2 * spec.bound(k) + 1;
    contribution[k].resize(static_cast<std::size_t>(width));
    for (std::int64_t v = 0; v < width; ++v) {
      contribution[k][v] = checked_mul(taus[k], v - spec.bound(k));
    }
  }
  // |fold| <= sum_k |tau_k| a_k; checking that once makes the inner loop safe
  Wide reach = 0;
  for (std::size_t k = 0; k < n; ++k) {
    reach = checked_add(reach, checked_mul(wide_abs(taus[k]), spec.bound(k)));
  }

  std::vector<Wide> folds(static_cast<std::size_t>(total));
  constexpr std::int64_t kChunk = 4096;
  const std::int64_t chunks = (total + kChunk - 1) / kChunk;

#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::int64_t begin = c * kChunk;
    const std::int64_t end = std::min(total, begin + kChunk);
    auto digits = decode_box_index(spec, begin);
    for (std::size_t k = 0; k < n; ++k) digits[k] += spec.bound(k);
    for (std::int64_t r = begin; r < end; ++r) {
      Wide acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc += contribution[k][digits[k]];
      folds[r] = acc;
      for (std::size_t k = n; k-- > 0;) {
        if (digits[k] < 2 * spec.bound(k)) {
          ++digits[k];
          break;
        }
        digits[k] = 0;
      }
    }
  }
  return folds;
}

namespace {

std::vector<std::int64_t> sorted_ranks(const std::vector<Wide>& folds) {
  std::vector<std::int64_t> order(folds.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int64_t i, std::int64_t j) {
    return folds[i] != folds[j] ? folds[i] < folds[j] : i < j;
  });
  return order;
}

}  // namespace

std::vector<IndexPair> collision_pairs(const BoxSpec& spec, const FoldingSeq& taus,
                                       std::size_t max_pairs) {
  const auto folds = box_folds(spec, taus);
  const auto order = sorted_ranks(folds);
  std::vector<IndexPair> pairs;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start + 1;
    while (stop < order.size() && folds[order[stop]] == folds[order[start]]) ++stop;
    for (std::size_t p = start; p < stop; ++p) {
      for (std::size_t q = p + 1; q < stop; ++q) {
        if (pairs.size() >= max_pairs) goto done;
        pairs.emplace_back(order[p], order[q]);
      }
    }
    start = stop;
  }
done:
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

bool collision_free(const BoxSpec& spec, const FoldingSeq& taus) {
  auto folds = box_folds(spec, taus);
  std::sort(folds.begin(), folds.end());
  return std::adjacent_find(folds.begin(), folds.end()) == folds.end();
}

}  // namespace torusfold::kernels
