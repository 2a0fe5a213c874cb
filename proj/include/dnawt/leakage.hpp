#pragma once

// Secrecy and reliability measurements: information measures on explicit
// pmfs, exact enumeration of Eve's leakage and Bob's error probability for
// small wiretap codebooks, and Monte Carlo cross-checks.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnawt/block_erasure.hpp"
#include "dnawt/codec.hpp"
#include "dnawt/entropy.hpp"
#include "dnawt/errors.hpp"
#include "dnawt/rng.hpp"

namespace dnawt {

inline constexpr double kPmfTolerance = 1e-12;

inline void validate_pmf(std::span<const double> p, const char* name = "pmf") {
  // Neumaier summation keeps large uniform tables within tolerance.
  double sum = 0.0, carry = 0.0;
  for (double x : p) {
    require(x >= 0.0 && std::isfinite(x), ErrorKind::InvalidPMF, std::string(name) + " has a negative entry");
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  sum += carry;
  require(std::abs(sum - 1.0) <= kPmfTolerance, ErrorKind::InvalidPMF,
          std::string(name) + " sums to " + std::to_string(sum));
}

/// Row-major joint pmf P(X = r, Y = c).
class JointPMF {
 public:
  JointPMF(std::size_t rows, std::size_t cols, std::vector<double> probs)
      : rows_(rows), cols_(cols), probs_(std::move(probs)) {
    require(rows_ >= 1 && cols_ >= 1, ErrorKind::InvalidPMF, "empty support");
    require(probs_.size() == rows_ * cols_, ErrorKind::InvalidPMF, "probability table has the wrong size");
    validate_pmf(probs_, "joint pmf");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return probs_[r * cols_ + c]; }

  std::vector<double> row_marginal() const {
    std::vector<double> out(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c);
    return out;
  }

  std::vector<double> col_marginal() const {
    std::vector<double> out(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[c] += (*this)(r, c);
    return out;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> probs_;
};

inline double exact_mutual_information(const JointPMF& joint) {
  const auto pr = joint.row_marginal();
  const auto pc = joint.col_marginal();
  double mi = 0.0;
  for (std::size_t r = 0; r < joint.rows(); ++r) {
    for (std::size_t c = 0; c < joint.cols(); ++c) {
      const double p = joint(r, c);
      if (p > 0.0) mi += p * std::log2(p / (pr[r] * pc[c]));
    }
  }
  return std::max(0.0, mi);
}

inline double tv_distance(std::span<const double> p, std::span<const double> q) {
  require(p.size() == q.size(), ErrorKind::SupportMismatch, "pmfs live on different supports");
  validate_pmf(p, "p");
  validate_pmf(q, "q");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return std::min(1.0, 0.5 * acc);
}

/// D(p||q) in bits; +infinity when q vanishes somewhere p does not.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
  require(p.size() == q.size(), ErrorKind::SupportMismatch, "pmfs live on different supports");
  validate_pmf(p, "p");
  validate_pmf(q, "q");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    acc += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(0.0, acc);
}

/// d log2(|W| / d) for an L1 variation distance d, with the d = 0 limit set to 0.
inline double csiszar_bound(double variation, std::size_t n_w) {
  if (variation <= 0.0) return 0.0;
  return variation * std::log2(static_cast<double>(n_w) / variation);
}

struct LeakageReport {
  std::size_t n_w = 0;
  double mi_bits = 0.0;
  double tv = 0.0;             // half L1 distance between P_WZ and P_W x P_Z
  double csiszar_bound = 0.0;  // evaluated at the L1 distance 2 * tv
  double decode_error = std::numeric_limits<double>::quiet_NaN();
  std::string fingerprint;
};

inline bool csiszar_bound_check(const LeakageReport& report) {
  require(report.n_w >= 4, ErrorKind::DomainTooSmall, "the bound needs |W| >= 4");
  return report.mi_bits <= report.csiszar_bound + 1e-9;
}

inline std::string codebook_fingerprint(const WiretapCodebook& book) {
  return "m=" + std::to_string(book.m()) + ";l=" + std::to_string(book.l()) + ";n_w=" +
         std::to_string(book.n_w()) + ";n_k=" + std::to_string(book.n_k()) + ";n_aux=" +
         std::to_string(book.n_aux()) + ";seed=" + std::to_string(book.seed());
}

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

/// Per-mask leakage, variation and decoding-error values of one codebook.
/// Built once; evaluating at any erasure probability is a weighted sum.
class ErasureProfile {
 public:
  ErasureProfile(std::size_t m, std::size_t n_w, std::vector<double> mi, std::vector<double> tv,
                 std::vector<double> err)
      : m_(m), n_w_(n_w), mi_(std::move(mi)), tv_(std::move(tv)), err_(std::move(err)) {}

  std::size_t m() const noexcept { return m_; }
  std::size_t mask_count() const noexcept { return mi_.size(); }
  double mask_mi(std::size_t mask) const { return mi_[mask]; }
  double mask_tv(std::size_t mask) const { return tv_[mask]; }
  double mask_error(std::size_t mask) const { return err_[mask]; }

  double mutual_information(double eps) const { return weighted(mi_, eps); }
  double variation(double eps) const { return std::min(1.0, weighted(tv_, eps)); }
  double error_probability(double eps) const { return std::clamp(weighted(err_, eps), 0.0, 1.0); }

 private:
  // P(mask) = eps^{#erased} (1 - eps)^{#intact}; bit i of `mask` marks block i erased.
  double weighted(const std::vector<double>& per_mask, double eps) const {
    require_probability(eps, "eps");
    std::vector<double> pe(m_ + 1), pi(m_ + 1);
    for (std::size_t e = 0; e <= m_; ++e) {
      pe[e] = std::pow(eps, static_cast<double>(e));
      pi[e] = std::pow(1.0 - eps, static_cast<double>(e));
    }
    double acc = 0.0;
    for (std::size_t mask = 0; mask < per_mask.size(); ++mask) {
      if (per_mask[mask] == 0.0) continue;
      const auto e = static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(mask)));
      acc += pe[e] * pi[m_ - e] * per_mask[mask];
    }
    return acc;
  }

  std::size_t m_;
  std::size_t n_w_;
  std::vector<double> mi_, tv_, err_;
};

inline void check_enumeration_budget(const WiretapCodebook& book, std::uint64_t budget) {
  require(book.m() < 63, ErrorKind::BudgetExceeded, "too many blocks to enumerate erasure masks");
  const long double cells = std::ldexp(static_cast<long double>(book.size()), static_cast<int>(book.m()));
  require(cells <= static_cast<long double>(budget), ErrorKind::BudgetExceeded,
          "2^m * |codebook| = " + std::to_string(static_cast<double>(cells)) + " exceeds the budget " +
              std::to_string(budget));
}

namespace detail {

// One erasure mask of a codebook with m l <= 24; `keys` holds the masked words (MSB-first).
inline void dense_mask_profile(const WiretapCodebook& book, std::vector<std::uint64_t>& keys, double& mi,
                               double& tv, double& err) {
  const std::size_t bits = book.m() * book.l();
  const std::size_t Z = std::size_t{1} << bits;
  for (auto& k : keys) k >>= 64 - bits;
  const std::size_t N = book.size();
  const std::size_t n_w = book.n_w();
  const std::size_t n_k = book.n_k();
  const std::size_t n_aux = book.n_aux();
  const double inv_n = 1.0 / static_cast<double>(N);

  std::vector<std::uint32_t> cz(Z, 0), czw(Z * n_w, 0);
  for (std::size_t w = 0, idx = 0; w < n_w; ++w) {
    for (std::size_t r = 0; r < n_k * n_aux; ++r, ++idx) {
      ++cz[keys[idx]];
      ++czw[keys[idx] * n_w + w];
    }
  }
  double mi_e = 0.0, l1_e = 0.0;
  for (std::size_t z = 0; z < Z; ++z) {
    if (cz[z] == 0) continue;
    const double total = cz[z];
    const double expected = total / static_cast<double>(n_w);
    for (std::size_t w = 0; w < n_w; ++w) {
      const double c = czw[z * n_w + w];
      if (c > 0) mi_e += c * inv_n * std::log2(c * static_cast<double>(n_w) / total);
      l1_e += std::abs(c - expected) * inv_n;
    }
  }
  mi = std::max(0.0, mi_e);
  tv = 0.5 * l1_e;

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> first(Z * n_k, kNone);
  std::vector<std::uint32_t> count(Z * n_k, 0);
  std::vector<char> clash(Z * n_k, 0);
  for (std::size_t w = 0, idx = 0; w < n_w; ++w) {
    for (std::size_t k = 0; k < n_k; ++k) {
      for (std::size_t a = 0; a < n_aux; ++a, ++idx) {
        const std::size_t cell = k * Z + keys[idx];
        if (first[cell] == kNone)
          first[cell] = w;
        else if (first[cell] != w)
          clash[cell] = 1;
        ++count[cell];
      }
    }
  }
  std::size_t errors = 0;
  for (std::size_t cell = 0; cell < count.size(); ++cell) {
    if (clash[cell]) errors += count[cell];
  }
  err = static_cast<double>(errors) * inv_n;
}

}  // namespace detail

inline ErasureProfile erasure_profile(const WiretapCodebook& book,
                                      std::uint64_t budget = kDefaultEnumerationBudget) {
  check_enumeration_budget(book, budget);
  const std::size_t m = book.m();
  const std::size_t l = book.l();
  const std::size_t N = book.size();
  const std::size_t n_w = book.n_w();
  const std::size_t per_w = book.n_k() * book.n_aux();
  const std::size_t W = BitString::words_for(m * l);
  const std::size_t masks = std::size_t{1} << m;

  // Small content alphabets are tallied in flat tables instead of sorted.
  const std::size_t bits = m * l;
  const bool dense = bits <= 24 && (std::size_t{1} << bits) * std::max(n_w, book.n_k()) <= 8 * N;

  std::vector<double> mi(masks, 0.0), tv(masks, 0.0), err(masks, 0.0);
  std::vector<std::uint64_t> packed(N * W), keys(N * W);
  for (std::size_t idx = 0; idx < N; ++idx) {
    const auto cw = book.words()[idx].bits().words();
    std::copy(cw.begin(), cw.end(), packed.begin() + static_cast<std::ptrdiff_t>(idx * W));
  }
  std::vector<std::size_t> order(dense ? 0 : N);
  const auto key_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(keys.begin() + a * W, keys.begin() + (a + 1) * W, keys.begin() + b * W,
                                        keys.begin() + (b + 1) * W);
  };
  const auto key_eq = [&](std::size_t a, std::size_t b) {
    return std::equal(keys.begin() + a * W, keys.begin() + (a + 1) * W, keys.begin() + b * W);
  };
  const auto message = [&](std::size_t idx) { return idx / per_w; };
  const auto key_of = [&](std::size_t idx) { return (idx / book.n_aux()) % book.n_k(); };
  const double inv_n = 1.0 / static_cast<double>(N);

  for (std::size_t mask = 0; mask < masks; ++mask) {
    BitString keep(m * l);
    for (std::size_t i = 0; i < m; ++i) {
      if (((mask >> i) & 1U) == 0) {
        for (std::size_t j = 0; j < l; ++j) keep.set(i * l + j, true);
      }
    }
    const auto kw = keep.words();
    for (std::size_t idx = 0; idx < N; ++idx) {
      for (std::size_t t = 0; t < W; ++t) keys[idx * W + t] = packed[idx * W + t] & kw[t];
    }

    if (dense) {
      detail::dense_mask_profile(book, keys, mi[mask], tv[mask], err[mask]);
      continue;
    }

    // Eve: group by restricted content, then by message.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (key_less(a, b)) return true;
      if (key_less(b, a)) return false;
      return a < b;
    });
    double mi_e = 0.0;
    double l1_e = 0.0;
    for (std::size_t g = 0; g < N;) {
      std::size_t g_end = g + 1;
      while (g_end < N && key_eq(order[g], order[g_end])) ++g_end;
      const double cz = static_cast<double>(g_end - g);
      const double expected = cz / static_cast<double>(n_w);
      std::size_t present = 0;
      for (std::size_t r = g; r < g_end;) {
        std::size_t r_end = r + 1;
        while (r_end < g_end && message(order[r_end]) == message(order[r])) ++r_end;
        const double c = static_cast<double>(r_end - r);
        mi_e += c * inv_n * std::log2(c * static_cast<double>(n_w) / cz);
        l1_e += std::abs(c - expected) * inv_n;
        ++present;
        r = r_end;
      }
      l1_e += static_cast<double>(n_w - present) * expected * inv_n;
      g = g_end;
    }
    mi[mask] = std::max(0.0, mi_e);
    tv[mask] = 0.5 * l1_e;

    // Bob: with key k known, a content shared by two messages is undecodable.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (key_of(a) != key_of(b)) return key_of(a) < key_of(b);
      if (key_less(a, b)) return true;
      if (key_less(b, a)) return false;
      return a < b;
    });
    std::size_t errors = 0;
    for (std::size_t g = 0; g < N;) {
      std::size_t g_end = g + 1;
      while (g_end < N && key_of(order[g_end]) == key_of(order[g]) && key_eq(order[g], order[g_end])) ++g_end;
      // Sorted by flat index inside a group, so distinct messages show up at the ends.
      if (message(order[g]) != message(order[g_end - 1])) errors += g_end - g;
      g = g_end;
    }
    err[mask] = static_cast<double>(errors) * inv_n;
  }
  return ErasureProfile(m, n_w, std::move(mi), std::move(tv), std::move(err));
}

inline LeakageReport leakage_exact(const WiretapCodebook& book, double eps_w,
                                   std::uint64_t budget = kDefaultEnumerationBudget) {
  require_probability(eps_w, "eps_w");
  const ErasureProfile profile = erasure_profile(book, budget);
  LeakageReport r;
  r.n_w = book.n_w();
  r.mi_bits = profile.mutual_information(eps_w);
  r.tv = profile.variation(eps_w);
  r.csiszar_bound = csiszar_bound(2.0 * r.tv, r.n_w);
  r.fingerprint = codebook_fingerprint(book) + ";eps_w=" + std::to_string(eps_w);
  return r;
}

inline double error_prob_exact(const WiretapCodebook& book, double eps_m,
                               std::uint64_t budget = kDefaultEnumerationBudget) {
  require_probability(eps_m, "eps_m");
  return erasure_profile(book, budget).error_probability(eps_m);
}

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t trials = 0;
};

inline Estimate summarize(double sum, double sum_sq, std::size_t n) {
  Estimate e;
  e.trials = n;
  if (n == 0) return e;
  e.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - sum * e.mean) / static_cast<double>(n - 1));
    e.se = std::sqrt(var / static_cast<double>(n));
  }
  return e;
}

struct CodebookDraw {
  std::size_t w, k, aux;
  ErasureMask mask;
};

// Uniform (W, K, W~) and an erasure mask, all from trial-specific randomness.
inline CodebookDraw draw_trial(const WiretapCodebook& book, double eps, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const auto w = static_cast<std::size_t>(rng.below(book.n_w()));
  const auto k = static_cast<std::size_t>(rng.below(book.n_k()));
  const auto aux = static_cast<std::size_t>(rng.below(book.n_aux()));
  return {w, k, aux, draw_erasure_mask(book.m(), eps, rng)};
}

/// Averages the information density log2(P(z|w) / P(z)) over simulated
/// (w, z); its mean is exactly I(W;Z).
inline Estimate mc_leakage_estimate(const WiretapCodebook& book, double eps_w, std::size_t trials,
                                    std::uint64_t seed) {
  require_probability(eps_w, "eps_w");
  const std::size_t per_w = book.n_k() * book.n_aux();
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const CodebookDraw d = draw_trial(book, eps_w, derive_seed(seed, t));
    const ErasedWord z(book.word(d.w, d.k, d.aux), d.mask);
    std::size_t same_w = 0, all = 0;
    for (std::size_t idx = 0; idx < book.size(); ++idx) {
      if (z.consistent_with(book.words()[idx])) {
        ++all;
        if (idx / per_w == d.w) ++same_w;
      }
    }
    const double density =
        std::log2(static_cast<double>(same_w) * static_cast<double>(book.n_w()) / static_cast<double>(all));
    sum += density;
    sum_sq += density * density;
  }
  return summarize(sum, sum_sq, trials);
}

/// Fraction of simulated transmissions that Bob fails to decode correctly.
inline Estimate mc_error_estimate(const WiretapCodebook& book, double eps_m, std::size_t trials,
                                  std::uint64_t seed) {
  require_probability(eps_m, "eps_m");
  double errors = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const CodebookDraw d = draw_trial(book, eps_m, derive_seed(seed, t));
    const ErasedWord y(book.word(d.w, d.k, d.aux), d.mask);
    const DecodeResult r = wiretap_decode(y, d.k, book);
    if (!r.ok() || r.message != d.w) errors += 1.0;
  }
  return summarize(errors, errors, trials);
}

/// Canonical text key of an erased word: mask flags, then intact payloads.
inline std::string observation_key(const ErasedWord& z) {
  std::string key;
  key.reserve(z.m() * (z.l() + 1));
  for (std::size_t i = 0; i < z.m(); ++i) key.push_back(z.erased(i) ? 'e' : 'i');
  for (std::size_t i = 0; i < z.m(); ++i) {
    if (!z.erased(i)) key += z.blocks().block(i).to_string();
  }
  return key;
}

/// Plug-in mutual information of the empirical joint distribution. Biased
/// upward by roughly (#cells) / (2 n ln 2).
template <class W, class Z>
double plugin_mi_estimate(std::span<const std::pair<W, Z>> samples) {
  if (samples.empty()) return 0.0;
  std::map<std::pair<W, Z>, std::size_t> joint;
  std::map<W, std::size_t> mw;
  std::map<Z, std::size_t> mz;
  for (const auto& s : samples) {
    ++joint[s];
    ++mw[s.first];
    ++mz[s.second];
  }
  const double n = static_cast<double>(samples.size());
  double mi = 0.0;
  for (const auto& [pair, c] : joint) {
    const double cw = static_cast<double>(mw[pair.first]);
    const double cz = static_cast<double>(mz[pair.second]);
    mi += static_cast<double>(c) / n * std::log2(static_cast<double>(c) * n / (cw * cz));
  }
  return std::max(0.0, mi);
}

template <class W, class Z>
double plugin_mi_bootstrap_se(std::span<const std::pair<W, Z>> samples, std::size_t replicates,
                              std::uint64_t seed) {
  if (samples.size() < 2 || replicates < 2) return 0.0;
  SplitMix64 rng(seed);
  std::vector<std::pair<W, Z>> resample(samples.size());
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) {
    for (auto& s : resample) s = samples[rng.below(samples.size())];
    const double v = plugin_mi_estimate<W, Z>(resample);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(replicates);
  return std::sqrt(std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(replicates - 1)));
}

}  // namespace dnawt
