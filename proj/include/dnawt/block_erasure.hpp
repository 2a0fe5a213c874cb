#pragma once

// Block-erasure channel B-EC(eps, m, l) and the wiretap pair built from two
// independent copies of it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnawt/bits.hpp"
#include "dnawt/errors.hpp"
#include "dnawt/rng.hpp"

namespace dnawt {

/// m blocks of l binary symbols, stored as one packed ml-symbol string.
class BlockWord {
 public:
  BlockWord() = default;
  BlockWord(std::size_t m, std::size_t l) : m_(m), l_(l), bits_(m * l) {
    require(l >= 1, ErrorKind::InvalidGeometry, "block length must be positive");
  }

  BlockWord(std::size_t m, std::size_t l, BitString bits) : m_(m), l_(l), bits_(std::move(bits)) {
    require(l >= 1, ErrorKind::InvalidGeometry, "block length must be positive");
    require(bits_.size() == m * l, ErrorKind::LengthMismatch,
            "expected " + std::to_string(m * l) + " symbols, got " + std::to_string(bits_.size()));
  }

  static BlockWord random(std::size_t m, std::size_t l, SplitMix64& rng) {
    return BlockWord(m, l, BitString::random(m * l, rng));
  }

  std::size_t m() const noexcept { return m_; }
  std::size_t l() const noexcept { return l_; }
  const BitString& bits() const noexcept { return bits_; }

  BitString block(std::size_t i) const { return bits_.slice(i * l_, l_); }

  void set_block(std::size_t i, const BitString& b) {
    require(b.size() == l_, ErrorKind::LengthMismatch, "block has wrong length");
    bits_.copy_from(b, 0, i * l_, l_);
  }

  // Block i as a big-endian integer; only meaningful for l <= 64.
  std::uint64_t block_value(std::size_t i) const {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < l_; ++j) v = (v << 1) | static_cast<std::uint64_t>(bits_.get(i * l_ + j));
    return v;
  }

  bool block_equals(std::size_t i, const BlockWord& other) const {
    for (std::size_t j = 0; j < l_; ++j) {
      if (bits_.get(i * l_ + j) != other.bits_.get(i * l_ + j)) return false;
    }
    return true;
  }

  friend bool operator==(const BlockWord&, const BlockWord&) = default;

 private:
  std::size_t m_ = 0;
  std::size_t l_ = 1;
  BitString bits_;
};

/// Per-block erasure flags (true = erased).
class ErasureMask {
 public:
  ErasureMask() = default;
  explicit ErasureMask(std::size_t m, bool erased = false) : flags_(m, erased) {}

  std::size_t size() const noexcept { return flags_.size(); }
  bool erased(std::size_t i) const { return flags_[i]; }
  bool intact(std::size_t i) const { return !flags_[i]; }
  void set(std::size_t i, bool erased) { flags_[i] = erased; }

  std::size_t erased_count() const noexcept {
    std::size_t n = 0;
    for (bool f : flags_) n += f ? 1 : 0;
    return n;
  }
  std::size_t intact_count() const noexcept { return size() - erased_count(); }

  // Bit i of the result is set iff block i is erased (m <= 64).
  std::uint64_t as_bits() const noexcept {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < flags_.size(); ++i) v |= static_cast<std::uint64_t>(flags_[i]) << i;
    return v;
  }

  static ErasureMask from_bits(std::size_t m, std::uint64_t bits) {
    ErasureMask mask(m);
    for (std::size_t i = 0; i < m; ++i) mask.set(i, (bits >> i) & 1U);
    return mask;
  }

  friend bool operator==(const ErasureMask&, const ErasureMask&) = default;

 private:
  std::vector<bool> flags_;
};

/// Channel output: the input word with erased blocks zeroed, plus the mask.
/// Erased content is never inspected; zeroing keeps equality meaningful.
class ErasedWord {
 public:
  ErasedWord() = default;
  ErasedWord(BlockWord word, ErasureMask mask) : word_(std::move(word)), mask_(std::move(mask)) {
    require(mask_.size() == word_.m(), ErrorKind::LengthMismatch, "mask length differs from block count");
    const BitString zero(word_.l());
    BitString keep(word_.m() * word_.l());
    for (std::size_t i = 0; i < word_.m(); ++i) {
      if (mask_.erased(i)) {
        word_.set_block(i, zero);
      } else {
        for (std::size_t j = 0; j < word_.l(); ++j) keep.set(i * word_.l() + j, true);
      }
    }
    const auto kw = keep.words();
    keep_.assign(kw.begin(), kw.end());
  }

  static ErasedWord all_erased(std::size_t m, std::size_t l) {
    return ErasedWord(BlockWord(m, l), ErasureMask(m, true));
  }

  std::size_t m() const noexcept { return word_.m(); }
  std::size_t l() const noexcept { return word_.l(); }
  const ErasureMask& mask() const noexcept { return mask_; }
  const BlockWord& blocks() const noexcept { return word_; }
  bool erased(std::size_t i) const { return mask_.erased(i); }

  // Agreement with a candidate codeword on every intact block.
  bool consistent_with(const BlockWord& candidate) const {
    const auto mine = word_.bits().words();
    const auto theirs = candidate.bits().words();
    if (theirs.size() != mine.size() || candidate.l() != l()) return false;
    for (std::size_t i = 0; i < mine.size(); ++i) {
      if ((theirs[i] & keep_[i]) != mine[i]) return false;
    }
    return true;
  }

  // Packed ml-symbol mask with ones on intact blocks.
  std::span<const std::uint64_t> keep_words() const noexcept { return keep_; }

  friend bool operator==(const ErasedWord& a, const ErasedWord& b) {
    return a.word_ == b.word_ && a.mask_ == b.mask_;
  }

 private:
  BlockWord word_;
  ErasureMask mask_;
  std::vector<std::uint64_t> keep_;
};

inline ErasureMask draw_erasure_mask(std::size_t m, double eps, SplitMix64& rng) {
  ErasureMask mask(m);
  for (std::size_t i = 0; i < m; ++i) mask.set(i, rng.bernoulli(eps));
  return mask;
}

inline ErasedWord bec_transmit(const BlockWord& word, double eps, std::uint64_t seed) {
  require_probability(eps, "eps");
  SplitMix64 rng(seed);
  return ErasedWord(word, draw_erasure_mask(word.m(), eps, rng));
}

struct WiretapOutputs {
  ErasedWord bob;
  ErasedWord eve;
};

/// Bob's and Eve's branches draw from disjoint streams derived from `seed`.
inline WiretapOutputs bewtc_transmit(const BlockWord& word, double eps_m, double eps_w, std::uint64_t seed) {
  require_probability(eps_m, "eps_m");
  require_probability(eps_w, "eps_w");
  return {bec_transmit(word, eps_m, derive_seed(seed, 0)), bec_transmit(word, eps_w, derive_seed(seed, 1))};
}

/// Normalized information density of a uniform input: #intact / (m(1-eps)).
inline double information_density_ratio(const ErasureMask& mask, double eps) {
  require_probability(eps, "eps");
  const double denom = static_cast<double>(mask.size()) * (1.0 - eps);
  require(denom > 0.0, ErrorKind::DegenerateEpsilon, "m(1-eps) is zero");
  return static_cast<double>(mask.intact_count()) / denom;
}

inline double bec_capacity(double eps) {
  require_probability(eps, "eps");
  return 1.0 - eps;
}

}  // namespace dnawt
