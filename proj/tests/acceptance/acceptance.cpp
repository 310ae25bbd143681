// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Optional arguments select criteria by number, e.g.
//   acceptance 1 6 7

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "torusfold/commands.hpp"
#include "torusfold/norms.hpp"
#include "torusfold/random.hpp"
#include "torusfold/spectrum.hpp"
#include "torusfold/trigpoly.hpp"
#include "torusfold/verify.hpp"

using namespace torusfold;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Injectivity of admissible folds, collisions for near misses.

// Every box with n <= 5 and a_k in {1, 2, 3}, plus larger boxes up to
// |F| = 1e5.
std::vector<BoxSpec> sweep_boxes() {
  std::vector<BoxSpec> boxes;
  std::vector<std::int64_t> a;
  std::function<void(std::size_t)> grow = [&](std::size_t n) {
    if (!a.empty()) boxes.emplace_back(a);
    if (n == 5) return;
    for (std::int64_t v = 1; v <= 3; ++v) {
      a.push_back(v);
      grow(n + 1);
      a.pop_back();
    }
  };
  grow(0);
  for (std::vector<std::int64_t> big :
       {std::vector<std::int64_t>{49999}, {158, 157}, {22, 22, 22}, {7, 7, 7, 7},
        {4, 4, 4, 4, 4}, {2, 2, 2, 2, 2, 2, 2}, {1, 2, 3, 4, 5, 1}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}}) {
    boxes.emplace_back(big);
  }
  return boxes;
}

// Admissible: tau_1 = +-U(1, 5), then tau_{k+1} = 3 a_k |tau_k| + U(0, 3 a_k |tau_k|).
std::vector<std::int64_t> admissible_taus(const BoxSpec& box, Rng& rng) {
  std::vector<std::int64_t> t(box.size());
  t[0] = rng.uniform_int(1, 5) * (rng.uniform_int(0, 1) ? 1 : -1);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const std::int64_t need = 3 * box.bound(k) * std::abs(t[k]);
    t[k + 1] = need + rng.uniform_int(0, need);
  }
  return t;
}

// Near miss: tau_1 = +-1 and steps within 10% above the growth threshold,
// except step k, which falls short of it by a relative margin in (0, 0.1].
// A collision at step k needs |tau_{k+1}| <= 2 sum_{j<=k} a_j |tau_j|, about
// (2 a_k + 1) |tau_k| here, so a 10% shortfall from 3 a_k |tau_k| can only
// collide when a_k = 1.
std::vector<std::int64_t> near_miss_taus(const BoxSpec& box, Rng& rng, std::int64_t k) {
  std::vector<std::int64_t> t(box.size());
  t[0] = rng.uniform_int(0, 1) ? 1 : -1;
  for (std::size_t j = 0; j + 1 < t.size(); ++j) {
    const std::int64_t need = 3 * box.bound(j) * std::abs(t[j]);
    const auto spread = static_cast<std::int64_t>(std::floor(0.1 * static_cast<double>(need)));
    if (static_cast<std::int64_t>(j) == k) {
      t[j + 1] = std::max<std::int64_t>(1, need - rng.uniform_int(1, std::max<std::int64_t>(1, spread)));
    } else {
      t[j + 1] = need + rng.uniform_int(0, spread);
    }
  }
  return t;
}

Outcome criterion1() {
  constexpr int kPerBox = 100;
  const auto boxes = sweep_boxes();
  std::int64_t admissible_runs = 0, admissible_clean = 0, generator_errors = 0;
  std::int64_t violating_runs = 0, violating_hits = 0, pairs_checked = 0, bad_pairs = 0;
  std::int64_t unit_runs = 0, unit_hits = 0;  // violated step with a_k = 1
  std::uint64_t stream = 0;
  for (const auto& box : boxes) {
    for (int i = 0; i < kPerBox; ++i) {
      Rng rng(derive_seed(0xC1, stream++));
      const FoldingSeq taus(admissible_taus(box, rng));
      generator_errors += !check_admissibility(box, taus).overall_ok;
      ++admissible_runs;
      admissible_clean += collision_scan(box, taus, kDefaultEnumerationCap, 1).empty();
    }
    if (box.size() < 2) continue;
    for (int i = 0; i < kPerBox; ++i) {
      Rng rng(derive_seed(0xC1F, stream++));
      const auto k = rng.uniform_int(0, static_cast<std::int64_t>(box.size()) - 2);
      const FoldingSeq taus(near_miss_taus(box, rng, k));
      generator_errors += check_admissibility(box, taus).growth_ok[static_cast<std::size_t>(k)];
      ++violating_runs;
      const auto pairs = collision_scan(box, taus, kDefaultEnumerationCap, 10000);
      violating_hits += !pairs.empty();
      if (box.bound(static_cast<std::size_t>(k)) == 1) {
        ++unit_runs;
        unit_hits += !pairs.empty();
      }
      for (const auto& [x, y] : pairs) {
        ++pairs_checked;
        bad_pairs += !(x != y && box.contains(x.entries()) && box.contains(y.entries()) &&
                       fold(x, taus) == fold(y, taus));
      }
    }
  }
  const double hit_rate = static_cast<double>(violating_hits) / static_cast<double>(violating_runs);
  Outcome o;
  o.passed = admissible_clean == admissible_runs && hit_rate >= 0.5 && bad_pairs == 0 &&
             generator_errors == 0;
  o.detail = fmt("%zu boxes; admissible collision-free %lld/%lld; violating with collision "
                 "%lld/%lld (%.1f%%; %lld/%lld where a_k = 1 at the violated step); %lld pairs "
                 "verified, %lld bad; generator errors %lld",
                 boxes.size(), static_cast<long long>(admissible_clean),
                 static_cast<long long>(admissible_runs), static_cast<long long>(violating_hits),
                 static_cast<long long>(violating_runs), 100 * hit_rate,
                 static_cast<long long>(unit_hits), static_cast<long long>(unit_runs),
                 static_cast<long long>(pairs_checked), static_cast<long long>(bad_pairs),
                 static_cast<long long>(generator_errors));
  return o;
}

// ---------------------------------------------------------------------------
// 2. Slab estimate with c = 2 pi.

std::vector<std::int64_t> random_bounds(Rng& rng, std::int64_t dim, std::int64_t max_degree,
                                        std::int64_t last_min) {
  std::vector<std::int64_t> b(static_cast<std::size_t>(dim));
  for (auto& v : b) v = rng.uniform_int(0, max_degree);
  b.back() = rng.uniform_int(last_min, max_degree);
  return b;
}

CoefficientDist mixed_dist(Rng& rng) {
  static constexpr CoefficientDist kDists[] = {CoefficientDist::gaussian,
                                               CoefficientDist::unimodular,
                                               CoefficientDist::sparse};
  return kDists[rng.uniform_int(0, 2)];
}

TrigPoly draw_poly(const BoxSpec& box, CoefficientDist dist, Rng& rng) {
  const auto size = static_cast<std::size_t>(box.cardinality());
  return random_poly(box, dist, rng, std::min<std::size_t>(4, size));
}

Outcome criterion2() {
  constexpr int kPairs = 500;
  constexpr double kEps = 1e-2;
  constexpr std::int64_t kSamples[] = {16, 64, 256};
  int passed = 0, vacuous = 0;
  double min_slack = INFINITY, max_ratio = 0;
  for (int i = 0; i < kPairs; ++i) {
    Rng rng(derive_seed(0xC2, static_cast<std::uint64_t>(i)));
    const BoxSpec box(random_bounds(rng, rng.uniform_int(1, 3), 8, 1));
    const TrigPoly f = draw_poly(box, mixed_dist(rng), rng);
    const auto c = lemma1_check(f, kSamples[i % 3], kEps);
    passed += c.passed;
    vacuous += c.vacuous;
    min_slack = std::min(min_slack, c.slack);
    if (c.bound_rhs > 0) max_ratio = std::max(max_ratio, c.measured_lhs / c.bound_rhs);
  }
  return {passed == kPairs && vacuous == 0,
          fmt("%d/%d within bound + tolerance (eps %g); min slack %.3g; max lhs/bound %.3f",
              passed, kPairs, kEps, min_slack, max_ratio)};
}

// ---------------------------------------------------------------------------
// 3. Step-function identity behind the modulation estimate.

Outcome criterion3() {
  constexpr int kInputs = 200;
  constexpr double kEps = 1e-3;
  int passed = 0;
  double max_residual = 0, max_tol = 0;
  for (int i = 0; i < kInputs; ++i) {
    Rng rng(derive_seed(0xC3, static_cast<std::uint64_t>(i)));
    const auto count = static_cast<std::size_t>(rng.uniform_int(1, 5));
    const BoxSpec box(random_bounds(rng, rng.uniform_int(1, 2), 4, 1));
    const CoefficientDist dist = mixed_dist(rng);
    std::vector<TrigPoly> parts;
    for (std::size_t j = 0; j < count; ++j) parts.push_back(draw_poly(box, dist, rng));
    const std::int64_t s = box.bound(box.size() - 1);
    const std::int64_t n = 16 * s * rng.uniform_int(1, 4);
    const auto r = lemma3_check(parts, n, rng.uniform_int(-2, 2), kEps);
    passed += r.identity_passed;
    max_residual = std::max(max_residual, r.identity_residual);
    max_tol = std::max(max_tol, r.identity_tolerance);
  }
  return {passed == kInputs, fmt("%d/%d identities within tolerance (eps %g); max residual "
                                 "%.3g; max tolerance %.3g",
                                 passed, kInputs, kEps, max_residual, max_tol)};
}

// ---------------------------------------------------------------------------
// 4 and 5. Theorem chain over the cell matrix n in {2,3,4}, a_k in {1,2}.

std::vector<BoxSpec> cell_matrix() {
  std::vector<BoxSpec> cells;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::int64_t> a(n);
      for (std::size_t k = 0; k < n; ++k) a[k] = 1 + ((mask >> k) & 1u);
      cells.emplace_back(a);
    }
  }
  return cells;
}

Outcome criterion4() {
  constexpr int kDraws = 200;
  constexpr double kEps = 0.1;
  constexpr double kTarget = 0.05;
  constexpr double kBudgetSeconds = 1800;
  const auto start = Clock::now();
  const auto cells = cell_matrix();
  std::int64_t runs = 0, ratio_ok = 0, wn_ok = 0, steps_ok = 0, vacuous = 0;
  double max_k = 0, worst_margin = INFINITY, max_wn = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const FoldingSeq taus = suggest_tau(cells[c], kTarget);
    for (int i = 0; i < kDraws; ++i) {
      if (seconds_since(start) > kBudgetSeconds) {
        return {false, fmt("runtime budget of %.0f s exceeded after %lld chains", kBudgetSeconds,
                           static_cast<long long>(runs))};
      }
      Rng rng(derive_seed(0xC4 + c, static_cast<std::uint64_t>(i)));
      const TrigPoly f = random_poly(cells[c], CoefficientDist::gaussian, rng);
      const ChainReport r = theorem_chain(f, cells[c], taus, kEps);
      ++runs;
      ratio_ok += r.ratio_ok && !r.vacuous;
      wn_ok += r.wn_ok;
      steps_ok += r.steps_ok;
      vacuous += r.vacuous;
      for (double k : r.k_values) max_k = std::max(max_k, k);
      worst_margin = std::min({worst_margin, r.ratio - (r.lower - r.tolerance),
                               r.upper + r.tolerance - r.ratio});
      max_wn = std::max(max_wn, r.wn_residual);
    }
  }
  const double elapsed = seconds_since(start);
  return {ratio_ok == runs && wn_ok == runs && vacuous == 0,
          fmt("%zu cells x %d draws (eps %g): ratio in band %lld/%lld, |w_n|/|f| within 2eps "
              "%lld/%lld, per-step bounds %lld/%lld; max K %.4f; worst band margin %.3g; "
              "max w_n residual %.3g; %.0f s",
              cells.size(), kDraws, kEps, static_cast<long long>(ratio_ok),
              static_cast<long long>(runs), static_cast<long long>(wn_ok),
              static_cast<long long>(runs), static_cast<long long>(steps_ok),
              static_cast<long long>(runs), max_k, worst_margin, max_wn, elapsed)};
}

Outcome criterion5() {
  constexpr int kDraws = 50;
  constexpr double kEps = 0.05;
  const auto cells = cell_matrix();
  int runs = 0, passed = 0;
  double max_dev = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const FoldingSeq taus = suggest_tau(cells[c], 0.05);
    for (int i = 0; i < kDraws; ++i) {
      Rng rng(derive_seed(0xC5 + c, static_cast<std::uint64_t>(i)));
      const TrigPoly f = random_poly(cells[c], CoefficientDist::single, rng);
      const ChainReport r = theorem_chain(f, cells[c], taus, kEps);
      const double dev = std::abs(r.ratio - 1.0);
      ++runs;
      passed += dev <= 2 * kEps;
      max_dev = std::max(max_dev, dev);
    }
  }
  return {passed == runs,
          fmt("%d/%d single modes with |ratio - 1| <= 2eps (eps %g); max deviation %.3g", passed,
              runs, kEps, max_dev)};
}

// ---------------------------------------------------------------------------
// 6. Certified interval against Monte Carlo.

Outcome criterion6() {
  constexpr int kPolys = 50;
  constexpr double kEps = 1e-3;
  constexpr std::int64_t kSamples = 1'000'000;
  int contained = 0;
  double worst_z = 0;
  bool analytic_ok = false;
  for (int i = 0; i < kPolys; ++i) {
    Rng rng(derive_seed(0xC6, static_cast<std::uint64_t>(i)));
    TrigPoly f(1);
    if (i == 0) {
      f.add_term({0}, 1.0);
      f.add_term({1}, 1.0);
    } else {
      const BoxSpec box(random_bounds(rng, rng.uniform_int(1, 3), 4, 0));
      f = draw_poly(box, mixed_dist(rng), rng);
    }
    const NormEstimate est = l1_certified(f, kEps);
    const auto mc = l1_monte_carlo(f, kSamples, derive_seed(0xC6C, static_cast<std::uint64_t>(i)));
    // Constant-modulus inputs give std_error 0; allow for rounding there.
    const double rounding = 1e-12 * est.value;
    const double gap =
        std::max({0.0, est.lower() - mc.mean - rounding, mc.mean - est.upper() - rounding});
    const double z = mc.std_error > 0 ? gap / mc.std_error : (gap > 0 ? INFINITY : 0.0);
    contained += z <= 3.0;
    worst_z = std::max(worst_z, z);
    if (i == 0) analytic_ok = est.lower() <= 4 / M_PI && 4 / M_PI <= est.upper();
  }
  return {contained == kPolys && analytic_ok,
          fmt("%d/%d Monte Carlo means (1e6 samples) within 3 s.e. of the certified interval "
              "(eps %g); worst gap %.2f s.e.; 4/pi inside interval for 1+e(x): %s",
              contained, kPolys, kEps, worst_z, analytic_ok ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 7. Determinism of verify.

Outcome criterion7() {
  ExperimentConfig cfg;
  cfg.a = {2, 1, 2};
  cfg.tau_target = 0.05;
  cfg.seed = 20240607;
  cfg.draws = 12;
  cfg.eps = 0.05;
  const RunResult first = run_verify(cfg);
  const RunResult second = run_verify(cfg);
  const std::string r1 = first.report["records"].dump(), r2 = second.report["records"].dump();
  const bool same = r1 == r2 && first.csv == second.csv &&
                    first.report["summary"].dump() == second.report["summary"].dump();
  return {same, fmt("two verify runs (seed %llu, %lld draws): records %zu bytes, %s",
                    static_cast<unsigned long long>(cfg.seed), static_cast<long long>(cfg.draws),
                    r1.size(), same ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"injectivity and collisions", criterion1},
      {"slab estimate", criterion2},
      {"modulation identity", criterion3},
      {"theorem chain", criterion4},
      {"unimodular exactness", criterion5},
      {"Monte Carlo agreement", criterion6},
      {"determinism", criterion7},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.contains(number)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.passed;
    std::printf("criterion %d (%s): %s  %s  [%.1f s]\n", number, criteria[i].first,
                o.passed ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
