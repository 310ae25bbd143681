#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "torusfold/error.hpp"

namespace torusfold {

/// 128-bit working integer for folds and products of bounds and taus.
using Wide = __int128;

inline constexpr Wide kWideMax = static_cast<Wide>((~static_cast<unsigned __int128>(0)) >> 1);
inline constexpr Wide kWideMin = -kWideMax - 1;

inline Wide checked_mul(Wide a, Wide b) {
  Wide out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("128-bit multiplication overflow");
  }
  return out;
}

inline Wide checked_add(Wide a, Wide b) {
  Wide out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("128-bit addition overflow");
  }
  return out;
}

inline Wide wide_abs(Wide a) {
  if (a == kWideMin) throw OverflowError("abs of minimum 128-bit value");
  return a < 0 ? -a : a;
}

inline bool fits_int64(Wide a) {
  return a >= std::numeric_limits<std::int64_t>::min() &&
         a <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t narrow_int64(Wide a) {
  if (!fits_int64(a)) throw OverflowError("value does not fit in 64 bits");
  return static_cast<std::int64_t>(a);
}

inline std::string to_string(Wide v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  std::string digits;
  while (u != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

}  // namespace torusfold
