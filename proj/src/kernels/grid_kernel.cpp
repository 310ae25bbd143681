#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <omp.h>

#include "torusfold/error.hpp"
#include "torusfold/kernels.hpp"
#include "torusfold/trigpoly.hpp"

namespace torusfold::kernels {

namespace {

constexpr std::int64_t kTableMax = std::int64_t{1} << 20;
constexpr std::int64_t kSingleFftMax = std::int64_t{1} << 16;
// Short transforms stay in cache; 4096-8192 points is the measured sweet spot.
constexpr std::int64_t kChunkMax = 4096;
// Twiddles advance by multiplication and are re-anchored to exact roots at
// the start of every group of this many chunks.
constexpr std::int64_t kGroupChunks = 64;

// Neumaier accumulator for slab totals.
struct Accumulator {
  double sum = 0, carry = 0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

// sqrt(norm) rather than std::abs: hypot's overflow care is not needed here
// and dominates the cost of the FFT path.
inline double modulus(Complex z) { return std::sqrt(std::norm(z)); }

double sum_abs(const Complex* v, std::int64_t n) {
  // Interleaved re/im view keeps the inner loop vectorisable.
  const double* p = reinterpret_cast<const double*>(v);
  Accumulator acc;
  std::int64_t i = 0;
  for (; i + 64 <= n; i += 64) {
    double lane[4] = {0, 0, 0, 0};
    for (std::int64_t k = 2 * i; k < 2 * i + 128; k += 8) {
      for (int l = 0; l < 4; ++l) {
        const double re = p[k + 2 * l], im = p[k + 2 * l + 1];
        lane[l] += std::sqrt(re * re + im * im);
      }
    }
    acc.add((lane[0] + lane[1]) + (lane[2] + lane[3]));
  }
  double tail = 0;
  for (; i < n; ++i) tail += modulus(v[i]);
  acc.add(tail);
  return acc.value();
}

std::vector<Complex> root_table(std::int64_t n) {
  std::vector<Complex> t(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) t[k] = unit_root(k, n);
  return t;
}

std::int64_t mod_floor(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>(static_cast<unsigned __int128>(a) * b % n);
}

// ---------------------------------------------------------------------------
// FFTW plans are created once per size under a lock; execution with the
// new-array interface is thread safe.

struct FftwFree {
  void operator()(Complex* p) const { fftw_free(p); }
};
using FftBuffer = std::unique_ptr<Complex[], FftwFree>;

FftBuffer make_buffer(std::int64_t n) {
  auto* p = static_cast<Complex*>(fftw_malloc(sizeof(Complex) * static_cast<std::size_t>(n)));
  if (!p) throw Error("fftw_malloc failed");
  return FftBuffer(p);
}

fftw_plan plan_for(std::int64_t n) {
  static std::mutex mutex;
  static std::map<std::int64_t, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  auto in = make_buffer(n);
  auto out = make_buffer(n);
  // ESTIMATE keeps the chosen algorithm, and hence the rounding, reproducible.
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.get()),
                                    reinterpret_cast<fftw_complex*>(out.get()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
  if (!plan) throw Error("FFTW planning failed for size " + std::to_string(n));
  plans.emplace(n, plan);
  return plan;
}

std::int64_t chunk_length(std::int64_t n) {
  if (n <= kSingleFftMax) return n;
  for (std::int64_t m = kChunkMax; m >= 1; --m) {
    if (n % m == 0) return m;
  }
  return 1;
}

// ---------------------------------------------------------------------------

/// Evaluates sum_m |sum_b a_b e^{2 pi i freq_b m / N}| for m in [0, N).
class LineEvaluator {
 public:
  LineEvaluator(std::vector<std::int64_t> freqs, std::int64_t n)
      : freqs_(std::move(freqs)), n_(n) {
    const auto terms = static_cast<std::int64_t>(freqs_.size());
    const double log_n = std::log2(static_cast<double>(std::max<std::int64_t>(n_, 2)));
    direct_ = n_ <= kTableMax && terms <= std::max<double>(8.0, log_n);
    residues_.resize(freqs_.size());
    for (std::size_t b = 0; b < freqs_.size(); ++b) residues_[b] = mod_floor(freqs_[b], n_);
    if (direct_) {
      table_ = root_table(n_);
    } else {
      chunk_ = chunk_length(n_);
      chunks_ = n_ / chunk_;
      plan_ = plan_for(chunk_);
      for (std::size_t b = 0; b < freqs_.size(); ++b) {
        chunk_residues_.push_back(mod_floor(freqs_[b], chunk_));
        steps_.push_back(unit_root(freqs_[b], n_));
      }
    }
  }

  /// Independent work units: groups of consecutive chunks.
  std::int64_t groups() const { return direct_ ? 1 : (chunks_ + kGroupChunks - 1) / kGroupChunks; }

  struct Scratch {
    FftBuffer in, out;
    std::vector<std::int64_t> idx;
    std::vector<Complex> twiddle;
  };

  Scratch scratch() const {
    Scratch s;
    if (!direct_) {
      s.in = make_buffer(chunk_);
      s.out = make_buffer(chunk_);
    }
    s.idx.resize(freqs_.size());
    s.twiddle.resize(freqs_.size());
    return s;
  }

  /// Sum over the points of group g (all points when direct). Chunk r covers
  /// the points m = r + chunks * q, q < chunk, i.e. one FFT of the folded
  /// coefficients a_b e^{2 pi i freq_b r / N} placed at freq_b mod chunk.
  double group_sum(std::span<const Complex> coeffs, std::int64_t g, Scratch& s) const {
    if (direct_) return direct_sum(coeffs, s);
    const std::int64_t r0 = g * kGroupChunks;
    const std::int64_t r1 = std::min(r0 + kGroupChunks, chunks_);
    for (std::size_t b = 0; b < freqs_.size(); ++b) {
      s.twiddle[b] = unit_root(static_cast<Wide>(freqs_[b]) * r0, n_);
    }
    Accumulator acc;
    Complex* in = s.in.get();
    for (std::int64_t r = r0; r < r1; ++r) {
      std::fill(in, in + chunk_, Complex(0.0));
      for (std::size_t b = 0; b < freqs_.size(); ++b) {
        in[chunk_residues_[b]] += coeffs[b] * s.twiddle[b];
        s.twiddle[b] *= steps_[b];
      }
      fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(in),
                       reinterpret_cast<fftw_complex*>(s.out.get()));
      acc.add(sum_abs(s.out.get(), chunk_));
    }
    return acc.value();
  }

  double line_sum(std::span<const Complex> coeffs, Scratch& s) const {
    if (direct_) return direct_sum(coeffs, s);
    Accumulator acc;
    for (std::int64_t g = 0; g < groups(); ++g) acc.add(group_sum(coeffs, g, s));
    return acc.value();
  }

 private:
  double direct_sum(std::span<const Complex> coeffs, Scratch& s) const {
    std::fill(s.idx.begin(), s.idx.end(), 0);
    Accumulator acc;
    double block = 0;
    const std::size_t terms = freqs_.size();
    for (std::int64_t m = 0; m < n_; ++m) {
      Complex v = 0.0;
      for (std::size_t b = 0; b < terms; ++b) {
        v += coeffs[b] * table_[s.idx[b]];
        s.idx[b] += residues_[b];
        if (s.idx[b] >= n_) s.idx[b] -= n_;
      }
      block += modulus(v);
      if ((m & 63) == 63) {
        acc.add(block);
        block = 0;
      }
    }
    acc.add(block);
    return acc.value();
  }

  std::vector<std::int64_t> freqs_;
  std::vector<std::int64_t> residues_;
  std::vector<std::int64_t> chunk_residues_;
  std::vector<Complex> steps_;
  std::int64_t n_;
  bool direct_ = false;
  std::vector<Complex> table_;
  std::int64_t chunk_ = 0, chunks_ = 0;
  fftw_plan plan_ = nullptr;
};

// One restriction step: coefficients over keys at level l are collapsed onto
// the distinct suffixes (level l+1) after substituting x_l = i / N_l.
struct Level {
  std::vector<std::int64_t> freq;       // axis-l frequency of each key
  std::vector<std::int64_t> residue;    // freq mod N_l
  std::vector<std::size_t> parent;      // index of the suffix in level l+1
  std::size_t next_size = 0;
  std::int64_t samples = 1;
  std::vector<Complex> table;           // N_l-th roots of unity when N_l is small

  void restrict_to(std::span<const Complex> in, std::int64_t i, std::vector<Complex>& out) const {
    out.assign(next_size, Complex(0.0));
    if (!table.empty()) {
      for (std::size_t t = 0; t < in.size(); ++t) {
        out[parent[t]] += in[t] * table[mulmod(residue[t], i, samples)];
      }
    } else {
      for (std::size_t t = 0; t < in.size(); ++t) {
        out[parent[t]] += in[t] * unit_root(static_cast<Wide>(freq[t]) * i, samples);
      }
    }
  }
};

struct Workspace {
  std::vector<std::vector<Complex>> coeffs;  // per level
  LineEvaluator::Scratch line;
};

class GridPlan {
 public:
  GridPlan(const TrigPoly& f, std::span<const std::int64_t> samples)
      : samples_(samples.begin(), samples.end()) {
    const std::size_t d = f.dim();
    std::vector<Frequency> keys;
    keys.reserve(f.size());
    for (const auto& [lambda, c] : f.coeffs()) {
      keys.push_back(lambda);
      top_.push_back(c);
    }
    for (std::size_t l = 0; l + 1 < d; ++l) {
      Level level;
      level.samples = samples_[l];
      std::map<Frequency, std::size_t> suffix_index;
      std::vector<Frequency> next;
      for (const auto& key : keys) {
        Frequency suffix(key.begin() + 1, key.end());
        auto [it, inserted] = suffix_index.try_emplace(suffix, next.size());
        if (inserted) next.push_back(std::move(suffix));
        level.freq.push_back(key.front());
        level.residue.push_back(mod_floor(key.front(), level.samples));
        level.parent.push_back(it->second);
      }
      level.next_size = next.size();
      if (level.samples <= kTableMax) level.table = root_table(level.samples);
      levels_.push_back(std::move(level));
      keys = std::move(next);
    }
    std::vector<std::int64_t> line_freqs;
    line_freqs.reserve(keys.size());
    for (const auto& key : keys) line_freqs.push_back(key.front());
    line_ = std::make_unique<LineEvaluator>(std::move(line_freqs), samples_.back());
  }

  double mean_abs() const {
    double total_points = 1;
    for (auto n : samples_) total_points *= static_cast<double>(n);
    std::vector<double> partials;

    if (levels_.empty()) {
      // Univariate: parallel over chunk groups.
      const std::int64_t groups = line_->groups();
      partials.assign(static_cast<std::size_t>(groups), 0.0);
#pragma omp parallel
      {
        auto scratch = line_->scratch();
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t g = 0; g < groups; ++g) partials[g] = line_->group_sum(top_, g, scratch);
      }
    } else {
      const std::int64_t outer = samples_.front();
      partials.assign(static_cast<std::size_t>(outer), 0.0);
#pragma omp parallel
      {
        Workspace ws;
        ws.coeffs.resize(levels_.size() + 1);
        ws.line = line_->scratch();
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < outer; ++i) {
          levels_[0].restrict_to(top_, i, ws.coeffs[1]);
          partials[i] = descend(1, ws);
        }
      }
    }
    return pairwise_sum(partials) / total_points;
  }

 private:
  double descend(std::size_t l, Workspace& ws) const {
    if (l == levels_.size()) return line_->line_sum(ws.coeffs[l], ws.line);
    Accumulator acc;
    const Level& level = levels_[l];
    for (std::int64_t i = 0; i < level.samples; ++i) {
      level.restrict_to(ws.coeffs[l], i, ws.coeffs[l + 1]);
      acc.add(descend(l + 1, ws));
    }
    return acc.value();
  }

  std::vector<std::int64_t> samples_;
  std::vector<Complex> top_;
  std::vector<Level> levels_;
  std::unique_ptr<LineEvaluator> line_;
};

void validate(const TrigPoly& f, std::span<const std::int64_t> samples) {
  if (samples.size() != f.dim()) {
    throw DomainError("grid has " + std::to_string(samples.size()) + " axes, polynomial has " +
                      std::to_string(f.dim()));
  }
  for (auto n : samples) {
    if (n < 1) throw DomainError("grid sample counts must be >= 1");
  }
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double grid_mean_abs(const TrigPoly& f, std::span<const std::int64_t> samples) {
  validate(f, samples);
  if (f.empty()) return 0.0;
  if (f.dim() == 0) return std::abs(f.coeffs().begin()->second);
  return GridPlan(f, samples).mean_abs();
}

}  // namespace torusfold::kernels
