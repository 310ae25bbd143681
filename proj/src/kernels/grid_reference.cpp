#include <cmath>

#include "torusfold/error.hpp"
#include "torusfold/kernels.hpp"
#include "torusfold/trigpoly.hpp"

namespace torusfold::kernels {

// Every point, every term, every axis: sum_t c_t prod_k e^{2 pi i l_k i_k / N_k}
// with each phase reduced exactly.
double grid_mean_abs_reference(const TrigPoly& f, std::span<const std::int64_t> samples) {
  if (samples.size() != f.dim()) throw DomainError("grid/polynomial dimension mismatch");
  const std::size_t d = f.dim();
  std::vector<std::int64_t> idx(d, 0);
  double sum = 0, carry = 0, points = 0;
  while (true) {
    Complex value = 0.0;
    for (const auto& [lambda, c] : f.coeffs()) {
      Complex term = c;
      for (std::size_t k = 0; k < d; ++k) {
        term *= unit_root(static_cast<Wide>(lambda[k]) * idx[k], samples[k]);
      }
      value += term;
    }
    const double v = std::abs(value);
    const double t = sum + v;
    carry += std::abs(sum) >= v ? (sum - t) + v : (v - t) + sum;
    sum = t;
    points += 1;

    std::size_t k = d;
    bool done = true;
    while (k > 0) {
      --k;
      if (++idx[k] < samples[k]) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) return (sum + carry) / points;
  }
}

}  // namespace torusfold::kernels
