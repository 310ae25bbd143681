#include "torusfold/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "torusfold/error.hpp"
#include "torusfold/kernels.hpp"
#include "torusfold/random.hpp"

namespace torusfold {

namespace {

constexpr std::int64_t kFftFriendlyFrom = std::int64_t{1} << 16;
constexpr std::int64_t kFftChunk = 4096;

void require_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be a positive real");
}

std::vector<std::int64_t> centered_degrees(const TrigPoly& f) {
  std::vector<std::int64_t> s(f.dim());
  for (std::size_t k = 0; k < f.dim(); ++k) s[k] = centered_degree(f, k);
  return s;
}

std::string grid_text(std::span<const std::int64_t> samples) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < samples.size(); ++k) os << (k ? ", " : "") << samples[k];
  os << ")";
  return os.str();
}

// Smallest 2^a 3^b 5^c 7^d >= n, so the FFT along the last axis stays fast.
std::int64_t smooth_at_least(std::int64_t n) {
  for (std::int64_t m = n;; ++m) {
    std::int64_t r = m;
    for (std::int64_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace

double rectangle_rule_radius(std::int64_t degree, std::int64_t samples, double bernstein_constant) {
  if (samples < 1) throw DomainError("sample counts must be >= 1");
  if (degree == 0) return 0.0;
  const double q = bernstein_constant * static_cast<double>(degree) / static_cast<double>(samples);
  return q * q / 8.0;
}

double certified_rel_error(std::span<const std::int64_t> degrees,
                           std::span<const std::int64_t> samples, double bernstein_constant) {
  if (degrees.size() != samples.size()) throw DomainError("degree/grid length mismatch");
  double keep = 1.0;
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    const double r = rectangle_rule_radius(degrees[k], samples[k], bernstein_constant);
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    keep *= 1.0 - r;
  }
  return 1.0 / keep - 1.0;
}

std::vector<std::int64_t> certified_grid(const TrigPoly& f, double eps, const NormOptions& opts) {
  require_eps(eps);
  if (f.size() <= 1) return std::vector<std::int64_t>(f.dim(), 1);
  return certified_grid_for(centered_degrees(f), eps, opts);
}

std::vector<std::int64_t> certified_grid_for(std::span<const std::int64_t> degrees, double eps,
                                             const NormOptions& opts) {
  require_eps(eps);
  const auto active = std::count_if(degrees.begin(), degrees.end(), [](auto s) { return s > 0; });
  std::vector<std::int64_t> samples(degrees.size(), 1);
  if (active == 0) return samples;

  const double r = -std::expm1(-std::log1p(eps) / static_cast<double>(active));
  double total = 1.0;
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    if (degrees[k] == 0) continue;
    const double want = opts.bernstein_constant * static_cast<double>(degrees[k]) / std::sqrt(8.0 * r);
    if (!(want < 4.0e18)) {
      throw BudgetExceeded("certified grid along axis " + std::to_string(k) +
                           " needs more than 4e18 samples");
    }
    auto n = static_cast<std::int64_t>(std::ceil(want));
    // Guard the ceil against rounding in the radius formula.
    while (rectangle_rule_radius(degrees[k], n, opts.bernstein_constant) > r) ++n;
    if (k + 1 == degrees.size() && n > kFftFriendlyFrom) {
      n = (n + kFftChunk - 1) / kFftChunk * kFftChunk;
    } else if (k + 1 == degrees.size()) {
      n = smooth_at_least(n);
    }
    samples[k] = n;
    total *= static_cast<double>(n);
  }
  if (total > opts.max_grid_points) {
    std::ostringstream os;
    os << "certified grid N = " << grid_text(samples) << " has " << total
       << " points, over the budget of " << opts.max_grid_points;
    throw BudgetExceeded(os.str());
  }
  return samples;
}

NormEstimate l1_on_grid(const TrigPoly& f, std::span<const std::int64_t> samples,
                        const NormOptions& opts) {
  if (samples.size() != f.dim()) throw DomainError("grid/polynomial dimension mismatch");
  NormEstimate est;
  est.grid.assign(samples.begin(), samples.end());
  est.bernstein_constant = opts.bernstein_constant;
  if (f.empty()) return est;
  est.value = kernels::grid_mean_abs(f, samples);
  est.rel_error = certified_rel_error(centered_degrees(f), samples, opts.bernstein_constant);
  return est;
}

NormEstimate l1_certified(const TrigPoly& f, double eps, const NormOptions& opts) {
  require_eps(eps);
  const auto samples = certified_grid(f, eps, opts);
  return l1_on_grid(f, samples, opts);
}

MonteCarloEstimate l1_monte_carlo(const TrigPoly& f, std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("Monte Carlo needs at least one sample");
  constexpr std::int64_t kBlock = 4096;
  const std::int64_t blocks = (samples + kBlock - 1) / kBlock;
  struct Moments {
    double count = 0, mean = 0, m2 = 0;
  };
  std::vector<Moments> parts(static_cast<std::size_t>(blocks));
  const PointEvaluator eval(f);

#pragma omp parallel
  {
    std::vector<double> x(f.dim());
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
      const std::int64_t count = std::min(kBlock, samples - b * kBlock);
      Moments m;
      for (std::int64_t i = 0; i < count; ++i) {
        for (auto& xi : x) xi = rng.uniform();
        const double v = std::abs(eval(x));
        m.count += 1;
        const double delta = v - m.mean;
        m.mean += delta / m.count;
        m.m2 += delta * (v - m.mean);
      }
      parts[b] = m;
    }
  }

  Moments all;
  for (const auto& p : parts) {
    const double n = all.count + p.count;
    const double delta = p.mean - all.mean;
    all.mean += delta * p.count / n;
    all.m2 += p.m2 + delta * delta * all.count * p.count / n;
    all.count = n;
  }
  MonteCarloEstimate out;
  out.mean = all.mean;
  out.samples = samples;
  if (samples > 1) {
    const double var = std::max(0.0, all.m2 / (all.count - 1));
    out.std_error = std::sqrt(var / all.count);
  }
  return out;
}

NormEstimate step_norm(const StepApprox& sa, double eps, const NormOptions& opts) {
  require_eps(eps);
  NormEstimate est;
  est.bernstein_constant = opts.bernstein_constant;
  std::vector<double> values;
  values.reserve(sa.slices().size());
  for (const auto& slice : sa.slices()) {
    if (slice.dim() == 0) {
      values.push_back(slice.empty() ? 0.0 : std::abs(slice.coeffs().begin()->second));
      continue;
    }
    const NormEstimate s = l1_certified(slice, eps, opts);
    values.push_back(s.value);
    est.rel_error = std::max(est.rel_error, s.rel_error);
    if (est.grid.empty() || s.grid > est.grid) est.grid = s.grid;
  }
  est.grid.push_back(sa.samples());
  est.value = kernels::pairwise_sum(values) / static_cast<double>(sa.samples());
  return est;
}

}  // namespace torusfold
