#include "torusfold/random.hpp"

#include <cmath>
#include <set>

#include "torusfold/error.hpp"

namespace torusfold {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::sqrt(0.5);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw DomainError("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == UINT64_MAX) return static_cast<std::int64_t>(engine_());
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % range);
}

CoefficientDist parse_distribution(const std::string& name) {
  if (name == "gaussian") return CoefficientDist::gaussian;
  if (name == "unimodular") return CoefficientDist::unimodular;
  if (name == "sparse") return CoefficientDist::sparse;
  if (name == "single") return CoefficientDist::single;
  throw ParseError("unknown distribution '" + name +
                   "' (expected gaussian, unimodular, sparse or single)");
}

std::string to_string(CoefficientDist dist) {
  switch (dist) {
    case CoefficientDist::gaussian: return "gaussian";
    case CoefficientDist::unimodular: return "unimodular";
    case CoefficientDist::sparse: return "sparse";
    case CoefficientDist::single: return "single";
  }
  return "?";
}

namespace {

Frequency random_frequency(const BoxSpec& box, Rng& rng) {
  Frequency lambda(box.size());
  for (std::size_t k = 0; k < box.size(); ++k) {
    lambda[k] = rng.uniform_int(-box.bound(k), box.bound(k));
  }
  return lambda;
}

}  // namespace

TrigPoly random_poly(const BoxSpec& box, CoefficientDist dist, Rng& rng, std::size_t sparse_k,
                     std::int64_t cap) {
  TrigPoly f(box.size());
  switch (dist) {
    case CoefficientDist::gaussian:
    case CoefficientDist::unimodular:
      for_each_in_box(box, cap, [&](std::span<const std::int64_t> lambda) {
        const Complex c = dist == CoefficientDist::gaussian ? rng.complex_normal()
                                                           : std::polar(1.0, kTwoPi * rng.uniform());
        f.add_term(Frequency(lambda.begin(), lambda.end()), c);
      });
      break;
    case CoefficientDist::sparse: {
      const Wide card = box.cardinality();
      if (static_cast<Wide>(sparse_k) > card) {
        throw DomainError("sparse_k exceeds the number of box frequencies");
      }
      std::set<Frequency> chosen;
      while (chosen.size() < sparse_k) {
        Frequency lambda = random_frequency(box, rng);
        if (chosen.insert(lambda).second) f.add_term(lambda, rng.complex_normal());
      }
      break;
    }
    case CoefficientDist::single:
      f.add_term(random_frequency(box, rng), 1.0);
      break;
  }
  return f;
}

}  // namespace torusfold
