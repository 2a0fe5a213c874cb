#pragma once

// Oligo pools, frequency vectors and the noise-free shuffling-sampling
// channel, together with the derived observations (distinct projection,
// genie-aided survival set) used by the converse machinery.

#include <algorithm>
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

#include "dnawt/bits.hpp"
#include "dnawt/errors.hpp"
#include "dnawt/rng.hpp"

namespace dnawt {

using Oligo = BitString;

/// Multiset of M oligos of common length L. Stored sorted, so multiset
/// equality is plain structural equality.
class OligoPool {
 public:
  explicit OligoPool(std::size_t length) : length_(length) {}

  OligoPool(std::size_t length, std::vector<Oligo> molecules)
      : length_(length), molecules_(std::move(molecules)) {
    for (const auto& o : molecules_) {
      require(o.size() == length_, ErrorKind::LengthMismatch,
              "oligo of length " + std::to_string(o.size()) + " in a pool of length " +
                  std::to_string(length_));
    }
    std::sort(molecules_.begin(), molecules_.end());
  }

  static OligoPool from_strings(std::size_t length, const std::vector<std::string>& symbols) {
    std::vector<Oligo> molecules;
    molecules.reserve(symbols.size());
    for (const auto& s : symbols) molecules.push_back(Oligo::from_string(s));
    return OligoPool(length, std::move(molecules));
  }

  std::size_t length() const noexcept { return length_; }
  std::size_t size() const noexcept { return molecules_.size(); }
  bool empty() const noexcept { return molecules_.empty(); }
  std::span<const Oligo> molecules() const noexcept { return molecules_; }

  friend bool operator==(const OligoPool&, const OligoPool&) = default;

 private:
  std::size_t length_;
  std::vector<Oligo> molecules_;
};

/// Count-vector view of a multiset over the length-L binary strings. Only
/// strings with a positive count are stored.
class FrequencyVector {
 public:
  explicit FrequencyVector(std::size_t length) : length_(length) {}

  void add(const Oligo& a, std::uint64_t count = 1) {
    require(a.size() == length_, ErrorKind::LengthMismatch, "frequency vector key has wrong length");
    if (count == 0) return;
    counts_[a] += count;
    total_ += count;
  }

  std::uint64_t count(const Oligo& a) const {
    auto it = counts_.find(a);
    return it == counts_.end() ? 0 : it->second;
  }

  std::size_t length() const noexcept { return length_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t support_size() const noexcept { return counts_.size(); }
  const std::map<Oligo, std::uint64_t>& counts() const noexcept { return counts_; }

  friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;

 private:
  std::size_t length_;
  std::map<Oligo, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Copy-count distribution (pi_0, ..., pi_D) of one molecule passing
/// through the sampling channel.
class SamplingDistribution {
 public:
  static constexpr std::size_t kDefaultMaxCopies = 8;
  static constexpr double kSumTolerance = 1e-12;

  explicit SamplingDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    require(!probs_.empty(), ErrorKind::InvalidDistribution, "sampling distribution is empty");
    double sum = 0.0;
    for (double p : probs_) {
      require(p >= 0.0 && std::isfinite(p), ErrorKind::InvalidDistribution,
              "sampling probabilities must be finite and non-negative");
      sum += p;
    }
    require(std::abs(sum - 1.0) <= kSumTolerance, ErrorKind::InvalidDistribution,
            "sampling probabilities sum to " + std::to_string(sum));
    cdf_.resize(probs_.size());
    std::partial_sum(probs_.begin(), probs_.end(), cdf_.begin());
  }

  /// Bernoulli survival channel (pi_0, 1 - pi_0).
  static SamplingDistribution erasure(double pi0) {
    require_probability(pi0, "pi0");
    return SamplingDistribution({pi0, 1.0 - pi0});
  }

  /// Poisson(mean) copy counts truncated at `max_copies`, tail mass folded into the last entry.
  static SamplingDistribution truncated_poisson(double mean, std::size_t max_copies = kDefaultMaxCopies) {
    require(mean >= 0.0, ErrorKind::InvalidDistribution, "Poisson mean must be non-negative");
    std::vector<double> p(max_copies + 1);
    double term = std::exp(-mean);
    double acc = 0.0;
    for (std::size_t n = 0; n < max_copies; ++n) {
      p[n] = term;
      acc += term;
      term *= mean / static_cast<double>(n + 1);
    }
    p[max_copies] = std::max(0.0, 1.0 - acc);
    return SamplingDistribution(std::move(p));
  }

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t max_copies() const noexcept { return probs_.size() - 1; }
  double pi0() const noexcept { return probs_[0]; }
  double operator[](std::size_t n) const noexcept { return n < probs_.size() ? probs_[n] : 0.0; }

  // Inverse-CDF draw. Uses exactly one uniform per call, with n == 0 iff u < pi_0.
  std::size_t sample(SplitMix64& rng) const {
    const double u = rng.uniform01();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) return max_copies();
    return static_cast<std::size_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

/// Finite proxy for the asymptotic ratio L / log2(M).
struct ChannelGeometry {
  std::size_t M;
  std::size_t L;

  static std::size_t index_width(std::size_t M) {
    std::size_t w = 0;
    while ((std::size_t{1} << w) < M) ++w;
    return w;
  }

  double beta() const {
    return M <= 1 ? std::numeric_limits<double>::infinity()
                  : static_cast<double>(L) / std::log2(static_cast<double>(M));
  }

  void validate() const {
    require(M >= 1, ErrorKind::InvalidGeometry, "pool size M must be positive");
    require(L >= index_width(M) + 1, ErrorKind::InvalidGeometry,
            "L must be at least ceil(log2 M) + 1");
    require(beta() > 1.0, ErrorKind::InvalidGeometry, "beta = L / log2 M must exceed 1");
  }
};

inline FrequencyVector to_frequency_vector(const OligoPool& pool) {
  FrequencyVector f(pool.length());
  for (const auto& o : pool.molecules()) f.add(o);
  return f;
}

inline OligoPool from_frequency_vector(const FrequencyVector& f) {
  std::vector<Oligo> molecules;
  molecules.reserve(f.total());
  for (const auto& [oligo, n] : f.counts()) molecules.insert(molecules.end(), n, oligo);
  return OligoPool(f.length(), std::move(molecules));
}

/// Eve's presence indicator vector: 1{f(a) > 0} for every string a.
inline FrequencyVector distinct_projection(const FrequencyVector& f) {
  FrequencyVector out(f.length());
  for (const auto& [oligo, n] : f.counts()) {
    if (n > 0) out.add(oligo, 1);
  }
  return out;
}

inline FrequencyVector distinct_projection(const OligoPool& pool) {
  return distinct_projection(to_frequency_vector(pool));
}

/// Noise-free shuffling-sampling channel: every molecule is emitted n times
/// with probability pi_n, independently. Output order is canonical.
inline OligoPool shuffle_sample(const OligoPool& pool, const SamplingDistribution& dist, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Oligo> out;
  out.reserve(pool.size());
  for (const auto& o : pool.molecules()) {
    const std::size_t n = dist.sample(rng);
    out.insert(out.end(), n, o);
  }
  return OligoPool(pool.length(), std::move(out));
}

/// Genie-aided view of the sampling channel: the sub-multiset of input
/// molecules sampled at least once, duplicates kept apart. Consumes the
/// generator exactly like shuffle_sample, so with the same seed it returns
/// the molecules that shuffle_sample kept.
inline FrequencyVector genie_sample(const OligoPool& pool, const SamplingDistribution& dist, std::uint64_t seed) {
  SplitMix64 rng(seed);
  FrequencyVector out(pool.length());
  for (const auto& o : pool.molecules()) {
    if (dist.sample(rng) > 0) out.add(o);
  }
  return out;
}

/// Solves sum_n q_n a^n = p0_target for a in [0,1] by bisection. The
/// polynomial is non-decreasing on [0,1] and takes the values q_0 and 1 at
/// the endpoints.
inline double weaken_eve_distribution(const SamplingDistribution& q, double p0_target) {
  require_probability(p0_target, "p0_target");
  if (q.pi0() > p0_target) {
    throw Error(ErrorKind::NoSolution, "q0 = " + std::to_string(q.pi0()) +
                                           " exceeds the target erasure probability " +
                                           std::to_string(p0_target));
  }
  const auto eval = [&](double a) {
    double acc = 0.0;
    const auto probs = q.probs();
    for (std::size_t n = probs.size(); n-- > 0;) acc = acc * a + probs[n];  // Horner
    return acc - p0_target;
  };
  double lo = 0.0;
  double hi = 1.0;
  double mid = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double g = eval(mid);
    if (std::abs(g) <= 1e-13 || hi - lo <= 0x1.0p-60) break;
    if (g < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace dnawt
