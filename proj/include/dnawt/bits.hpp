#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "dnawt/errors.hpp"
#include "dnawt/rng.hpp"

namespace dnawt {

// Fixed-length binary string, packed MSB-first into 64-bit words so that
// word-wise comparison is lexicographic order on the symbols.
class BitString {
 public:
  static constexpr std::size_t kWordBits = 64;

  BitString() = default;
  explicit BitString(std::size_t length) : length_(length), words_(words_for(length), 0) {}

  static BitString from_string(std::string_view symbols) {
    BitString out(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      require(symbols[i] == '0' || symbols[i] == '1', ErrorKind::DomainError,
              "binary strings contain only '0' and '1'");
      out.set(i, symbols[i] == '1');
    }
    return out;
  }

  // Big-endian binary representation of `value` in `width` symbols.
  static BitString from_uint(std::uint64_t value, std::size_t width) {
    BitString out(width);
    for (std::size_t i = 0; i < width; ++i) {
      const std::size_t shift = width - 1 - i;
      out.set(i, shift < 64 && ((value >> shift) & 1U));
    }
    return out;
  }

  static BitString random(std::size_t length, SplitMix64& rng) {
    BitString out(length);
    for (auto& w : out.words_) w = rng();
    out.clear_tail();
    return out;
  }

  static constexpr std::size_t words_for(std::size_t length) {
    return (length + kWordBits - 1) / kWordBits;
  }

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  bool get(std::size_t i) const {
    return (words_[i / kWordBits] >> (kWordBits - 1 - i % kWordBits)) & 1U;
  }

  void set(std::size_t i, bool bit) {
    const std::uint64_t mask = std::uint64_t{1} << (kWordBits - 1 - i % kWordBits);
    if (bit) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  // Copies `count` symbols of `src` starting at `src_pos` into this string at `dst_pos`.
  void copy_from(const BitString& src, std::size_t src_pos, std::size_t dst_pos, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) set(dst_pos + i, src.get(src_pos + i));
  }

  BitString slice(std::size_t pos, std::size_t count) const {
    BitString out(count);
    out.copy_from(*this, pos, 0, count);
    return out;
  }

  // Interprets the first `width` symbols as a big-endian unsigned integer.
  std::uint64_t prefix_value(std::size_t width) const {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(get(i));
    return v;
  }

  std::string to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) s[i] = get(i) ? '1' : '0';
    return s;
  }

  std::span<const std::uint64_t> words() const noexcept { return {words_.data(), words_.size()}; }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.length_ == b.length_ && a.words_ == b.words_;
  }
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    if (auto c = a.length_ <=> b.length_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.words_.begin(), a.words_.end(), b.words_.begin(),
                                                  b.words_.end());
  }

 private:
  void clear_tail() {
    const std::size_t rem = length_ % kWordBits;
    if (rem != 0 && !words_.empty()) words_.back() &= ~std::uint64_t{0} << (kWordBits - rem);
  }

  std::size_t length_ = 0;
  boost::container::small_vector<std::uint64_t, 2> words_;  // most codewords fit inline
};

}  // namespace dnawt
