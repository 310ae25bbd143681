#include "torusfold/kernels.hpp"

namespace torusfold::kernels {

std::vector<IndexPair> collision_pairs_reference(const BoxSpec& spec, const FoldingSeq& taus,
                                                 std::size_t max_pairs) {
  const auto total = static_cast<std::int64_t>(spec.cardinality());
  std::vector<Wide> folds;
  folds.reserve(static_cast<std::size_t>(total));
  for (std::int64_t r = 0; r < total; ++r) folds.push_back(fold(decode_box_index(spec, r), taus));

  std::vector<IndexPair> pairs;
  for (std::int64_t i = 0; i < total; ++i) {
    for (std::int64_t j = i + 1; j < total; ++j) {
      if (folds[i] == folds[j]) {
        if (pairs.size() >= max_pairs) return pairs;
        pairs.emplace_back(i, j);
      }
    }
  }
  return pairs;
}

}  // namespace torusfold::kernels
