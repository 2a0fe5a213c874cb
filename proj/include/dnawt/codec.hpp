#pragma once

// Achievability schemes: index-prefix reduction of the sampling channel to a
// block-erasure channel, the one-time pad, and the random-binning wiretap
// codebook with consistency decoding.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dnawt/bits.hpp"
#include "dnawt/block_erasure.hpp"
#include "dnawt/errors.hpp"
#include "dnawt/rng.hpp"
#include "dnawt/sampling_channel.hpp"

namespace dnawt {

struct IndexScheme {
  std::size_t M;
  std::size_t L;

  IndexScheme(std::size_t M_, std::size_t L_) : M(M_), L(L_) {
    require(M >= 1, ErrorKind::InvalidGeometry, "M must be positive");
    require(L >= index_width() + 1, ErrorKind::InvalidGeometry,
            "payload width L - ceil(log2 M) must be at least 1");
  }

  std::size_t index_width() const { return ChannelGeometry::index_width(M); }
  std::size_t payload_width() const { return L - index_width(); }
};

/// Oligo i is binary(i) followed by payload slice i.
inline OligoPool index_encode(const BitString& payload, const IndexScheme& scheme) {
  const std::size_t pw = scheme.payload_width();
  const std::size_t iw = scheme.index_width();
  require(payload.size() == scheme.M * pw, ErrorKind::LengthMismatch,
          "payload has " + std::to_string(payload.size()) + " symbols, expected " +
              std::to_string(scheme.M * pw));
  std::vector<Oligo> molecules;
  molecules.reserve(scheme.M);
  for (std::size_t i = 0; i < scheme.M; ++i) {
    Oligo o(scheme.L);
    o.copy_from(BitString::from_uint(i, iw), 0, 0, iw);
    o.copy_from(payload, i * pw, iw, pw);
    molecules.push_back(std::move(o));
  }
  return OligoPool(scheme.L, std::move(molecules));
}

inline OligoPool index_encode(const BlockWord& word, const IndexScheme& scheme) {
  require(word.m() == scheme.M && word.l() == scheme.payload_width(), ErrorKind::InvalidGeometry,
          "block geometry does not match the index scheme");
  return index_encode(word.bits(), scheme);
}

/// Missing indices become erased blocks; duplicates collapse.
inline ErasedWord index_decode(const OligoPool& received, const IndexScheme& scheme) {
  require(received.length() == scheme.L, ErrorKind::LengthMismatch, "received oligos have the wrong length");
  const std::size_t pw = scheme.payload_width();
  const std::size_t iw = scheme.index_width();
  BlockWord word(scheme.M, pw);
  ErasureMask mask(scheme.M, true);
  for (const auto& o : received.molecules()) {
    const std::uint64_t idx = o.prefix_value(iw);
    require(idx < scheme.M, ErrorKind::OutOfRange, "index " + std::to_string(idx) + " is not below M");
    const BitString payload = o.slice(iw, pw);
    if (mask.intact(idx)) {
      require(word.block(idx) == payload, ErrorKind::ConflictingPayload,
              "index " + std::to_string(idx) + " carries two different payloads");
      continue;
    }
    word.set_block(idx, payload);
    mask.set(idx, false);
  }
  return ErasedWord(std::move(word), std::move(mask));
}

struct KeyedCiphertext {
  std::uint64_t value;
  std::uint64_t modulus;
  friend bool operator==(const KeyedCiphertext&, const KeyedCiphertext&) = default;
};

inline KeyedCiphertext otp_encrypt(std::uint64_t w, std::uint64_t k, std::uint64_t modulus) {
  require(modulus >= 1, ErrorKind::OutOfRange, "modulus must be positive");
  require(w < modulus && k < modulus, ErrorKind::OutOfRange, "message and key must lie below the modulus");
  const auto sum = static_cast<unsigned __int128>(w) + k;
  return {static_cast<std::uint64_t>(sum % modulus), modulus};
}

inline std::uint64_t otp_decrypt(const KeyedCiphertext& c, std::uint64_t k) {
  require(c.modulus >= 1 && c.value < c.modulus, ErrorKind::OutOfRange, "ciphertext out of range");
  require(k < c.modulus, ErrorKind::OutOfRange, "key must lie below the modulus");
  return (c.value + (c.modulus - k)) % c.modulus;
}

/// Complete codeword table over (w, k, w~), row-major in that order.
class WiretapCodebook {
 public:
  static constexpr std::uint64_t kDefaultCapSymbols = std::uint64_t{1} << 30;

  WiretapCodebook(std::size_t m, std::size_t l, std::size_t n_w, std::size_t n_k, std::size_t n_aux,
                  std::uint64_t seed, std::vector<BlockWord> words)
      : m_(m), l_(l), n_w_(n_w), n_k_(n_k), n_aux_(n_aux), seed_(seed), words_(std::move(words)) {
    require(words_.size() == n_w * n_k * n_aux, ErrorKind::LengthMismatch, "codebook table is incomplete");
    for (const auto& x : words_) {
      require(x.m() == m && x.l() == l, ErrorKind::LengthMismatch, "codeword geometry mismatch");
    }
  }

  std::size_t m() const noexcept { return m_; }
  std::size_t l() const noexcept { return l_; }
  std::size_t n_w() const noexcept { return n_w_; }
  std::size_t n_k() const noexcept { return n_k_; }
  std::size_t n_aux() const noexcept { return n_aux_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t size() const noexcept { return words_.size(); }

  std::size_t flat_index(std::size_t w, std::size_t k, std::size_t aux) const noexcept {
    return (w * n_k_ + k) * n_aux_ + aux;
  }

  const BlockWord& word(std::size_t w, std::size_t k, std::size_t aux) const {
    require(w < n_w_ && k < n_k_ && aux < n_aux_, ErrorKind::OutOfRange, "codebook index out of range");
    return words_[flat_index(w, k, aux)];
  }

  const std::vector<BlockWord>& words() const noexcept { return words_; }

  // Copy restricted to the first `n_aux` auxiliary columns.
  WiretapCodebook sub_book(std::size_t n_aux) const {
    require(n_aux >= 1 && n_aux <= n_aux_, ErrorKind::OutOfRange, "sub-book width out of range");
    std::vector<BlockWord> words;
    words.reserve(n_w_ * n_k_ * n_aux);
    for (std::size_t w = 0; w < n_w_; ++w)
      for (std::size_t k = 0; k < n_k_; ++k)
        for (std::size_t a = 0; a < n_aux; ++a) words.push_back(words_[flat_index(w, k, a)]);
    return WiretapCodebook(m_, l_, n_w_, n_k_, n_aux, seed_, std::move(words));
  }

 private:
  std::size_t m_, l_, n_w_, n_k_, n_aux_;
  std::uint64_t seed_;
  std::vector<BlockWord> words_;
};

inline void check_codebook_budget(std::size_t m, std::size_t l, std::size_t n_w, std::size_t n_k,
                                  std::size_t n_aux, std::uint64_t cap_symbols) {
  require(m >= 1 && l >= 1 && n_w >= 1 && n_k >= 1 && n_aux >= 1, ErrorKind::OutOfRange,
          "codebook sizes must be at least 1");
  long double symbols = static_cast<long double>(n_w) * n_k * n_aux * m * l;
  require(symbols <= static_cast<long double>(cap_symbols), ErrorKind::CapacityBudget,
          "codebook would hold " + std::to_string(static_cast<double>(symbols)) + " symbols, cap is " +
              std::to_string(cap_symbols));
}

inline WiretapCodebook generate_codebook(std::size_t m, std::size_t l, std::size_t n_w, std::size_t n_k,
                                         std::size_t n_aux, std::uint64_t seed,
                                         std::uint64_t cap_symbols = WiretapCodebook::kDefaultCapSymbols) {
  check_codebook_budget(m, l, n_w, n_k, n_aux, cap_symbols);
  SplitMix64 rng(seed);
  std::vector<BlockWord> words;
  words.reserve(n_w * n_k * n_aux);
  for (std::size_t i = 0; i < n_w * n_k * n_aux; ++i) words.push_back(BlockWord::random(m, l, rng));
  return WiretapCodebook(m, l, n_w, n_k, n_aux, seed, std::move(words));
}

/// One-time pad followed by a random channel code for the ciphertext:
/// word(w, k) = base[(w + k) mod N].
inline WiretapCodebook make_otp_codebook(std::size_t m, std::size_t l, std::size_t modulus, std::uint64_t seed,
                                         std::uint64_t cap_symbols = WiretapCodebook::kDefaultCapSymbols) {
  check_codebook_budget(m, l, modulus, modulus, 1, cap_symbols);
  SplitMix64 rng(seed);
  std::vector<BlockWord> base;
  base.reserve(modulus);
  for (std::size_t c = 0; c < modulus; ++c) base.push_back(BlockWord::random(m, l, rng));
  std::vector<BlockWord> words;
  words.reserve(modulus * modulus);
  for (std::size_t w = 0; w < modulus; ++w)
    for (std::size_t k = 0; k < modulus; ++k) words.push_back(base[otp_encrypt(w, k, modulus).value]);
  return WiretapCodebook(m, l, modulus, modulus, 1, seed, std::move(words));
}

inline std::size_t draw_aux(const WiretapCodebook& book, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return static_cast<std::size_t>(rng.below(book.n_aux()));
}

inline BlockWord wiretap_encode(std::size_t w, std::size_t k, const WiretapCodebook& book, std::uint64_t seed) {
  require(w < book.n_w() && k < book.n_k(), ErrorKind::OutOfRange, "message or key out of range");
  return book.word(w, k, draw_aux(book, seed));
}

enum class DecodeStatus { Ok, Ambiguous, NoMatch };

constexpr std::string_view to_string(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::Ok: return "Ok";
    case DecodeStatus::Ambiguous: return "Ambiguous";
    case DecodeStatus::NoMatch: return "NoMatch";
  }
  return "Unknown";
}

struct DecodeResult {
  DecodeStatus status = DecodeStatus::NoMatch;
  std::size_t message = 0;                // valid when status == Ok
  std::size_t consistent_messages = 0;
  std::size_t consistent_pairs = 0;       // > 1 with status Ok means a pair tie
  bool ok() const noexcept { return status == DecodeStatus::Ok; }
};

inline DecodeResult wiretap_decode(const ErasedWord& y, std::size_t k, const WiretapCodebook& book) {
  require(y.m() == book.m() && y.l() == book.l(), ErrorKind::InvalidGeometry,
          "received word geometry does not match the codebook");
  require(k < book.n_k(), ErrorKind::OutOfRange, "key out of range");
  DecodeResult r;
  for (std::size_t w = 0; w < book.n_w(); ++w) {
    bool any = false;
    for (std::size_t a = 0; a < book.n_aux(); ++a) {
      if (y.consistent_with(book.word(w, k, a))) {
        any = true;
        ++r.consistent_pairs;
      }
    }
    if (any) {
      if (r.consistent_messages == 0) r.message = w;
      ++r.consistent_messages;
    }
  }
  if (r.consistent_messages == 1) {
    r.status = DecodeStatus::Ok;
  } else if (r.consistent_messages > 1) {
    r.status = DecodeStatus::Ambiguous;
  } else {
    r.status = DecodeStatus::NoMatch;
  }
  return r;
}

struct PipelineSeeds {
  std::uint64_t encode;
  std::uint64_t bob;
  std::uint64_t eve;

  static PipelineSeeds derive(std::uint64_t seed) {
    return {derive_seed(seed, 0), derive_seed(seed, 1), derive_seed(seed, 2)};
  }
};

struct PipelineResult {
  DecodeResult bob;
  ErasedWord bob_view;
  ErasedWord eve_view;
};

/// wiretap_encode -> index_encode -> sampling channels -> index_decode.
/// Bob decodes with the key; Eve only sees which distinct oligos survived.
inline PipelineResult dna_wiretap_pipeline(std::size_t w, std::size_t k, const ChannelGeometry& geometry,
                                           const SamplingDistribution& P, const SamplingDistribution& Q,
                                           const WiretapCodebook& book, const PipelineSeeds& seeds) {
  const IndexScheme scheme(geometry.M, geometry.L);
  require(book.m() == scheme.M && book.l() == scheme.payload_width(), ErrorKind::InvalidGeometry,
          "codebook geometry must be m = M, l = L - ceil(log2 M)");
  const BlockWord x = wiretap_encode(w, k, book, seeds.encode);
  const OligoPool pool = index_encode(x, scheme);
  ErasedWord bob_view = index_decode(shuffle_sample(pool, P, seeds.bob), scheme);
  const FrequencyVector eve_presence = distinct_projection(shuffle_sample(pool, Q, seeds.eve));
  ErasedWord eve_view = index_decode(from_frequency_vector(eve_presence), scheme);
  DecodeResult bob = wiretap_decode(bob_view, k, book);
  return {bob, std::move(bob_view), std::move(eve_view)};
}

}  // namespace dnawt
