#pragma once

// Reproducible random draws. Distributions are implemented here on top of
// mt19937_64 rather than <random>'s, whose output is implementation-defined.

#include <cstdint>
#include <random>
#include <string>

#include "torusfold/spectrum.hpp"
#include "torusfold/trigpoly.hpp"

namespace torusfold {

/// splitmix64 finaliser applied to base + index; independent child seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, both halves used).
  double normal();
  /// (N(0,1) + i N(0,1)) / sqrt(2)
  Complex complex_normal();
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class CoefficientDist {
  gaussian,    // complex normal amplitude on every box frequency
  unimodular,  // e^{2 pi i theta} on every box frequency
  sparse,      // complex normal on k distinct random frequencies
  single,      // one random frequency, unit amplitude
};

CoefficientDist parse_distribution(const std::string& name);
std::string to_string(CoefficientDist dist);

/// Random polynomial with support inside the box.
TrigPoly random_poly(const BoxSpec& box, CoefficientDist dist, Rng& rng,
                     std::size_t sparse_k = 4, std::int64_t cap = kDefaultEnumerationCap);

}  // namespace torusfold
