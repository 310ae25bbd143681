#include "torusfold/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torusfold/error.hpp"
#include "torusfold/kernels.hpp"

namespace torusfold {

namespace {

// Floating-point floor on top of the certified radius: exact grids have
// rel_error 0 but their sums still carry rounding.
constexpr double kRoundoff = 1e-12;

double abs_error(const NormEstimate& e) { return e.value * (e.rel_error + kRoundoff); }

void finish(LemmaCheck& c) {
  c.slack = c.bound_rhs - c.measured_lhs;
  c.passed = c.measured_lhs <= c.bound_rhs + c.tolerance;
}

std::int64_t max_last_degree(std::span<const TrigPoly> parts) {
  std::int64_t s = 0;
  for (const auto& p : parts) s = std::max(s, partial_degree(p, p.dim() - 1));
  return s;
}

// Average of |sum_j e^{2 pi i j u} f_j(y', m/N)| over u in [0,1), y' and m,
// evaluated point by point on a certified grid in (y', u).
NormEstimate step_modulated_direct(std::span<const TrigPoly> parts, std::int64_t samples,
                                   double eps, const NormOptions& opts) {
  const std::size_t d = parts.front().dim();
  const std::size_t ny = d - 1;
  const auto count = static_cast<std::int64_t>(parts.size());

  std::vector<std::int64_t> degrees;
  for (std::size_t k = 0; k < ny; ++k) {
    std::int64_t lo = 0, hi = 0;
    bool any = false;
    for (const auto& p : parts) {
      for (const auto& [lambda, c] : p.coeffs()) {
        lo = any ? std::min(lo, lambda[k]) : lambda[k];
        hi = any ? std::max(hi, lambda[k]) : lambda[k];
        any = true;
      }
    }
    degrees.push_back((hi - lo + 1) / 2);
  }
  degrees.push_back(count / 2);  // centred degree of the u-polynomial
  const auto grid = certified_grid_for(degrees, eps, opts);
  const std::int64_t nu = grid.back();

  std::vector<Complex> roots(static_cast<std::size_t>(nu));
  for (std::int64_t p = 0; p < nu; ++p) roots[p] = unit_root(p, nu);

  std::vector<PointEvaluator> evals;
  evals.reserve(parts.size());
  for (const auto& p : parts) evals.emplace_back(p);

  std::int64_t ny_points = 1;
  for (std::size_t k = 0; k < ny; ++k) ny_points *= grid[k];

  std::vector<double> per_slab(static_cast<std::size_t>(samples), 0.0);
#pragma omp parallel
  {
    std::vector<double> x(d);
    std::vector<Complex> vals(parts.size());
    std::vector<std::int64_t> idx(ny);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t m = 0; m < samples; ++m) {
      double sum = 0, carry = 0;
      x[d - 1] = static_cast<double>(m) / static_cast<double>(samples);
      for (std::int64_t yi = 0; yi < ny_points; ++yi) {
        std::int64_t rest = yi;
        for (std::size_t k = ny; k-- > 0;) {
          x[k] = static_cast<double>(rest % grid[k]) / static_cast<double>(grid[k]);
          rest /= grid[k];
        }
        for (std::size_t j = 0; j < parts.size(); ++j) vals[j] = evals[j](x);
        for (std::int64_t p = 0; p < nu; ++p) {
          // z = (m + p / nu) / N, so e^{2 pi i j N z} = e^{2 pi i j p / nu}.
          Complex w = 0.0;
          for (std::int64_t j = 0; j < count; ++j) {
            w += vals[static_cast<std::size_t>(j)] * roots[(j * p) % nu];
          }
          const double v = std::abs(w);
          const double t = sum + v;
          carry += std::abs(sum) >= v ? (sum - t) + v : (v - t) + sum;
          sum = t;
        }
      }
      per_slab[m] = sum + carry;
    }
  }
  NormEstimate est;
  est.grid = grid;
  est.grid.push_back(samples);
  est.bernstein_constant = opts.bernstein_constant;
  est.value = kernels::pairwise_sum(per_slab) /
              (static_cast<double>(samples) * static_cast<double>(ny_points) * static_cast<double>(nu));
  est.rel_error = certified_rel_error(degrees, grid, opts.bernstein_constant);
  return est;
}

// (1/N) sum_m ‖ sum_j e^{2 pi i j y} f_j(., m/N) ‖ with certified slice norms.
NormEstimate step_lifted(std::span<const TrigPoly> parts, std::int64_t samples, double eps,
                         const NormOptions& opts) {
  NormEstimate est;
  est.bernstein_constant = opts.bernstein_constant;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(samples));
  const std::size_t d = parts.front().dim();
  std::vector<TrigPoly> slices(parts.size());
  for (std::int64_t m = 0; m < samples; ++m) {
    // Slice m of the lifted step function: y' and the new axis remain.
    TrigPoly lifted(d);
    for (std::size_t j = 0; j < parts.size(); ++j) {
      for (const auto& [lambda, c] : parts[j].coeffs()) {
        Frequency key(lambda.begin(), lambda.end() - 1);
        key.push_back(static_cast<std::int64_t>(j));
        lifted.add_term(key, c * unit_root(static_cast<Wide>(lambda.back()) * m, samples));
      }
    }
    const NormEstimate s = l1_certified(lifted, eps, opts);
    values.push_back(s.value);
    est.rel_error = std::max(est.rel_error, s.rel_error);
    if (m == 0) est.grid = s.grid;
  }
  est.grid.push_back(samples);
  est.value = kernels::pairwise_sum(values) / static_cast<double>(samples);
  return est;
}

}  // namespace

double LemmaCheck::get(const std::string& key) const {
  for (const auto& [k, v] : context) {
    if (k == key) return v;
  }
  throw DomainError("no context entry '" + key + "'");
}

LemmaCheck lemma1_check(const TrigPoly& f, std::int64_t samples, double eps,
                        double bound_constant, const NormOptions& opts) {
  if (f.dim() == 0) throw DomainError("lemma1_check needs dimension >= 1");
  if (samples < 1) throw DomainError("lemma1_check needs N >= 1");
  const NormEstimate full = l1_certified(f, eps, opts);
  const NormEstimate step = step_norm(step_approx(f, samples), eps, opts);
  const std::int64_t s = partial_degree(f, f.dim() - 1);
  const double q = static_cast<double>(s) / static_cast<double>(samples);

  LemmaCheck c;
  c.measured_lhs = std::abs(full.value - step.value);
  c.bound_rhs = bound_constant * q * full.value;
  c.tolerance = abs_error(full) + abs_error(step) + bound_constant * q * abs_error(full);
  c.vacuous = s > samples;
  c.context = {{"s", static_cast<double>(s)},
               {"N", static_cast<double>(samples)},
               {"c", bound_constant},
               {"norm_f", full.value},
               {"norm_step", step.value}};
  finish(c);
  return c;
}

Lemma2Result lemma2_check(std::span<const TrigPoly> parts, std::int64_t first_offset, double eps,
                          const NormOptions& opts) {
  const TrigPoly w = lift_parts(parts, first_offset);
  const NormEstimate wn = l1_certified(w, eps, opts);
  std::vector<double> values;
  double err_sum = 0;
  for (const auto& p : parts) {
    const NormEstimate e = l1_certified(p, eps, opts);
    values.push_back(e.value);
    err_sum += abs_error(e);
  }
  const double sum = kernels::pairwise_sum(values);
  const auto count = static_cast<double>(parts.size());
  const std::vector<std::pair<std::string, double>> ctx = {
      {"l", static_cast<double>(first_offset)},
      {"k", static_cast<double>(first_offset) + count - 1},
      {"count", count},
      {"norm_w", wn.value},
      {"sum_norms", sum}};

  Lemma2Result r;
  r.upper.measured_lhs = wn.value;
  r.upper.bound_rhs = sum;
  r.upper.tolerance = abs_error(wn) + err_sum;
  r.upper.context = ctx;
  finish(r.upper);
  r.lower.measured_lhs = sum;
  r.lower.bound_rhs = count * wn.value;
  r.lower.tolerance = err_sum + count * abs_error(wn);
  r.lower.context = ctx;
  finish(r.lower);
  return r;
}

Lemma3Result lemma3_check(std::span<const TrigPoly> parts, std::int64_t samples,
                          std::int64_t first_offset, double eps, const NormOptions& opts) {
  if (samples < 1) throw DomainError("lemma3_check needs N >= 1");
  const TrigPoly wd = modulate_parts(parts, first_offset, samples);
  const TrigPoly wd1 = lift_parts(parts, first_offset);
  const NormEstimate a = l1_certified(wd, eps, opts);
  const NormEstimate b = l1_certified(wd1, eps, opts);
  const std::int64_t s = max_last_degree(parts);
  const auto count = static_cast<double>(parts.size());
  const double q = static_cast<double>(s) / static_cast<double>(samples);

  Lemma3Result r;
  r.norm_modulated = a.value;
  r.norm_lifted = b.value;
  const std::vector<std::pair<std::string, double>> ctx = {
      {"s", static_cast<double>(s)}, {"N", static_cast<double>(samples)},
      {"l", static_cast<double>(first_offset)}, {"count", count},
      {"norm_wd", a.value}, {"norm_wd1", b.value}};
  for (auto* c : {&r.tight, &r.loose}) {
    const double factor = 2.0 * (c == &r.tight ? count - 1 : count) * q;
    c->measured_lhs = std::abs(a.value - b.value);
    c->bound_rhs = factor * b.value;
    c->tolerance = abs_error(a) + abs_error(b) + factor * abs_error(b);
    c->vacuous = s > samples;
    c->context = ctx;
    c->context.emplace_back("factor", factor);
    finish(*c);
  }

  const NormEstimate route_a = step_modulated_direct(parts, samples, eps, opts);
  const NormEstimate route_b = step_lifted(parts, samples, eps, opts);
  r.identity_step_modulated = route_a.value;
  r.identity_step_lifted = route_b.value;
  r.identity_residual = std::abs(route_a.value - route_b.value);
  r.identity_tolerance = abs_error(route_a) + abs_error(route_b);
  r.identity_passed = r.identity_residual <= r.identity_tolerance;
  return r;
}

double KFactor::value() const {
  return static_cast<double>(static_cast<long double>(numerator) /
                             static_cast<long double>(denominator));
}

std::vector<KFactor> chain_k_factors(const BoxSpec& spec, const FoldingSeq& taus) {
  require_same_length(spec, taus);
  const std::size_t n = spec.size();
  std::vector<KFactor> out;
  for (std::size_t d = 1; d < n; ++d) {
    const std::size_t pivot = n - d;  // 0-based index of tau_{n-d+1}
    Wide weighted = 0;
    for (std::size_t j = 0; j < pivot; ++j) {
      weighted = checked_add(weighted, checked_mul(spec.bound(j), wide_abs(taus[j])));
    }
    KFactor k;
    k.numerator = checked_mul(checked_mul(4, spec.bound(pivot)), weighted);
    k.denominator = wide_abs(taus[pivot]);
    out.push_back(k);
  }
  return out;
}

ChainReport theorem_chain(const TrigPoly& f, const BoxSpec& spec, const FoldingSeq& taus,
                          double eps, const NormOptions& opts, std::int64_t cap) {
  require_same_length(spec, taus);
  if (f.dim() != spec.size()) throw DomainError("polynomial dimension does not match the box");
  if (!check_admissibility(spec, taus).overall_ok) {
    throw DomainError("folding sequence is not admissible for the box");
  }
  for (const auto& [lambda, c] : f.coeffs()) {
    if (!spec.contains(lambda)) {
      throw DomainError("frequency " + to_string(MultiIndex(lambda)) + " lies outside the box");
    }
  }
  if (!is_collision_free(spec, taus, cap)) {
    throw CollisionError("folding is not injective on the box");
  }

  ChainReport rep;
  rep.n = spec.size();
  rep.eps = eps;
  // Injectivity on the whole box is established, so merging never fires.
  const auto ws = chain_polys(f, taus, CollisionPolicy::merge, cap);
  for (const auto& w : ws) rep.norms.push_back(l1_certified(w, eps, opts));
  rep.f_norm = l1_certified(f, eps, opts);

  rep.kds = chain_k_factors(spec, taus);
  double k_sum = 0;
  for (const auto& k : rep.kds) {
    const double v = k.value();
    rep.k_values.push_back(v);
    rep.lower *= 1.0 - v;
    rep.upper *= 1.0 + v;
    rep.vacuous = rep.vacuous || v >= 1.0;
    k_sum += v;
  }
  rep.k_final = rep.lower > 0 ? std::max(rep.upper, 1.0 / rep.lower)
                              : std::numeric_limits<double>::infinity();
  rep.weak_bound_ok = rep.k_final <= std::exp(2.0 * k_sum);

  rep.steps_ok = true;
  for (std::size_t d = 1; d < rep.n; ++d) {
    const NormEstimate& a = rep.norms[d - 1];
    const NormEstimate& b = rep.norms[d];
    const double k = rep.k_values[d - 1];
    ChainStep step;
    step.d = d;
    step.lhs = std::abs(a.value - b.value);
    step.rhs = k * b.value;
    step.tolerance = abs_error(a) + abs_error(b) + k * abs_error(b);
    step.passed = step.lhs <= step.rhs + step.tolerance;
    rep.steps_ok = rep.steps_ok && step.passed;
    rep.steps.push_back(step);
  }

  if (f.empty()) {
    rep.ratio = 1.0;
    rep.wn_residual = 0.0;
  } else {
    rep.ratio = rep.norms.front().value / rep.f_norm.value;
    rep.wn_residual = std::abs(rep.norms.back().value / rep.f_norm.value - 1.0);
  }
  rep.tolerance = 3.0 * eps;
  rep.ratio_ok = rep.ratio >= rep.lower - rep.tolerance && rep.ratio <= rep.upper + rep.tolerance;
  rep.wn_ok = rep.wn_residual <= 2.0 * eps;
  rep.passed = rep.wn_ok && (rep.vacuous || (rep.steps_ok && rep.ratio_ok));
  return rep;
}

}  // namespace torusfold
