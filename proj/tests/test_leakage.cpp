#include <gtest/gtest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "dnawt/codec.hpp"
#include "dnawt/entropy.hpp"
#include "dnawt/leakage.hpp"
#include "support.hpp"

using namespace dnawt;
using dnawt::test::oracles;

namespace {

WiretapCodebook book_from_json(const nlohmann::json& c) {
  std::vector<BlockWord> words;
  for (const auto& s : c["words"])
    words.emplace_back(c["m"].get<std::size_t>(), c["l"].get<std::size_t>(),
                       BitString::from_string(s.get<std::string>()));
  return WiretapCodebook(c["m"], c["l"], c["n_w"], c["n_k"], c["n_aux"], 0, std::move(words));
}

// Eve's (w, z) samples for the plug-in estimator.
std::vector<std::pair<std::size_t, std::string>> eve_samples(const WiretapCodebook& book, double eps, std::size_t n,
                                                             std::uint64_t seed) {
  std::vector<std::pair<std::size_t, std::string>> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto d = draw_trial(book, eps, derive_seed(seed, t));
    out.emplace_back(d.w, observation_key(ErasedWord(book.word(d.w, d.k, d.aux), d.mask)));
  }
  return out;
}

}  // namespace

TEST(MutualInformation, Examples) {
  EXPECT_NEAR(exact_mutual_information(JointPMF(2, 2, {0.25, 0.25, 0.25, 0.25})), 0.0, 1e-15);
  EXPECT_NEAR(exact_mutual_information(JointPMF(2, 2, {0.5, 0.0, 0.0, 0.5})), 1.0, 1e-15);
  const double e = 0.11;
  const double bsc = exact_mutual_information(JointPMF(2, 2, {0.5 * (1 - e), 0.5 * e, 0.5 * e, 0.5 * (1 - e)}));
  EXPECT_NEAR(bsc, oracles()["bsc_capacity_011"].get<double>(), 1e-13);
  EXPECT_DNAWT_ERROR(JointPMF(2, 2, {0.5, 0.5, 0.5, 0.5}), InvalidPMF);
  EXPECT_DNAWT_ERROR(JointPMF(2, 2, {0.5, 0.5}), InvalidPMF);
}

TEST(MutualInformation, ProductFormIsZeroProperty) {
  SplitMix64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const std::size_t r = 1 + rng.below(6), c = 1 + rng.below(6);
    std::vector<double> a(r), b(c);
    double sa = 0, sb = 0;
    for (auto& x : a) sa += (x = rng.uniform01());
    for (auto& x : b) sb += (x = rng.uniform01());
    std::vector<double> joint;
    for (double x : a)
      for (double y : b) joint.push_back(x / sa * y / sb);
    EXPECT_LE(exact_mutual_information(JointPMF(r, c, joint)), 1e-12);
  }
}

TEST(Divergences, Examples) {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  EXPECT_DOUBLE_EQ(tv_distance(p, p), 0.0);
  EXPECT_DOUBLE_EQ(kl_divergence(p, p), 0.0);
  EXPECT_DOUBLE_EQ(tv_distance(p, q), 0.25);
  EXPECT_NEAR(kl_divergence(p, q), oracles()["kl_half_quarter_bits"].get<double>(), 1e-14);
  const std::vector<double> x{1.0, 0.0}, y{0.0, 1.0};
  EXPECT_DOUBLE_EQ(tv_distance(x, y), 1.0);
  EXPECT_TRUE(std::isinf(kl_divergence(x, y)));
  EXPECT_DNAWT_ERROR(tv_distance(p, std::vector<double>{1.0}), SupportMismatch);
  EXPECT_DNAWT_ERROR(kl_divergence(p, std::vector<double>{1.0}), SupportMismatch);
}

TEST(Csiszar, BoundAndCheck) {
  EXPECT_DOUBLE_EQ(csiszar_bound(0.0, 4), 0.0);
  EXPECT_DOUBLE_EQ(csiszar_bound(0.5, 4), 1.5);
  LeakageReport r;
  r.n_w = 4;
  r.mi_bits = 5e-10;
  EXPECT_TRUE(csiszar_bound_check(r));
  r.mi_bits = 1e-6;
  EXPECT_FALSE(csiszar_bound_check(r));
  r.n_w = 3;
  EXPECT_DNAWT_ERROR(csiszar_bound_check(r), DomainTooSmall);
}

TEST(Csiszar, HoldsOnEnumeratedConfigs) {
  SplitMix64 rng(12);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    const auto book = generate_codebook(1 + rng.below(6), 1 + rng.below(3), 4 + rng.below(5), 1 + rng.below(3),
                                        1 + rng.below(3), rng());
    const auto profile = erasure_profile(book);
    for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      LeakageReport rep;
      rep.n_w = book.n_w();
      rep.mi_bits = profile.mutual_information(eps);
      rep.tv = profile.variation(eps);
      rep.csiszar_bound = csiszar_bound(2.0 * rep.tv, rep.n_w);
      EXPECT_TRUE(csiszar_bound_check(rep)) << "mi " << rep.mi_bits << " tv " << rep.tv;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 200);
}

TEST(LeakageExact, MatchesIndependentOracle) {
  for (const auto& c : oracles()["leakage"]) {
    const auto book = book_from_json(c);
    const double eps_w = c["eps_w"], eps_m = c["eps_m"];
    const auto rep = leakage_exact(book, eps_w);
    EXPECT_NEAR(rep.mi_bits, c["mi_bits"].get<double>(), 1e-12) << c["name"] << " eps_w=" << eps_w;
    EXPECT_NEAR(rep.tv, c["tv"].get<double>(), 1e-12) << c["name"] << " eps_w=" << eps_w;
    EXPECT_NEAR(error_prob_exact(book, eps_m), c["decode_error"].get<double>(), 1e-12)
        << c["name"] << " eps_m=" << eps_m;
  }
}

TEST(LeakageExact, TrivialCases) {
  const auto book = generate_codebook(5, 3, 6, 2, 2, 77);
  EXPECT_EQ(leakage_exact(book, 1.0).mi_bits, 0.0);
  // n_k = n_aux = 1 with distinct codewords: Z determines W.
  const auto plain = generate_codebook(4, 8, 5, 1, 1, 78);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a + 1; b < 5; ++b) ASSERT_FALSE(plain.word(a, 0, 0) == plain.word(b, 0, 0));
  EXPECT_NEAR(leakage_exact(plain, 0.0).mi_bits, std::log2(5.0), 1e-12);
  EXPECT_NE(leakage_exact(book, 0.5).fingerprint.find("seed=77"), std::string::npos);
}

TEST(LeakageExact, BudgetEnforced) {
  const auto book = generate_codebook(12, 1, 16, 4, 4, 1);  // 2^12 * 256 = 2^20 cells
  EXPECT_NO_THROW(erasure_profile(book));
  EXPECT_DNAWT_ERROR(erasure_profile(book, std::uint64_t{1} << 19), BudgetExceeded);
  EXPECT_DNAWT_ERROR(leakage_exact(book, 0.5, 1000), BudgetExceeded);
}

TEST(LeakageExact, InvariantsOnRandomBooks) {
  SplitMix64 rng(21);
  for (int i = 0; i < 40; ++i) {
    const std::size_t m = 1 + rng.below(6), l = 1 + rng.below(3);
    const auto book = generate_codebook(m, l, 1 + rng.below(6), 1 + rng.below(3), 1 + rng.below(3), rng());
    const auto profile = erasure_profile(book);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double mi = profile.mutual_information(eps);
      EXPECT_GE(mi, 0.0);
      EXPECT_LE(mi, std::min(std::log2(double(book.n_w())), (1 - eps) * double(m * l)) + 1e-12);
      EXPECT_LE(mi, prev + 1e-12);
      EXPECT_GE(profile.variation(eps), 0.0);
      EXPECT_LE(profile.variation(eps), 1.0);
      prev = mi;
    }
  }
}

TEST(LeakageExact, OneTimePadLeaksNothing) {
  for (std::size_t N : {1u, 2u, 5u, 16u, 33u, 128u}) {
    const auto profile = erasure_profile(make_otp_codebook(3, 2, N, N));
    for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) EXPECT_LE(profile.mutual_information(eps), 1e-12) << N;
  }
}

TEST(LeakageExact, MonteCarloCrossCheck) {
  const auto book = generate_codebook(4, 2, 2, 2, 2, 4711);
  const double exact = leakage_exact(book, 0.75).mi_bits;
  const auto mc = mc_leakage_estimate(book, 0.75, 100000, 5);
  EXPECT_NEAR(mc.mean, exact, 3 * mc.se + 1e-12);
  const auto samples = eve_samples(book, 0.75, 100000, 6);
  const double plugin = plugin_mi_estimate<std::size_t, std::string>(samples);
  const double se = plugin_mi_bootstrap_se<std::size_t, std::string>(samples, 50, 7);
  EXPECT_NEAR(plugin, exact, 3 * se + 1e-3);
}

TEST(ErrorProbExact, Examples) {
  const auto book = generate_codebook(4, 8, 3, 2, 2, 15);
  EXPECT_EQ(error_prob_exact(book, 0.0), 0.0);
  EXPECT_EQ(error_prob_exact(book, 1.0), 1.0);
  const auto m6 = generate_codebook(6, 3, 4, 2, 2, 16);
  const double exact = error_prob_exact(m6, 0.2);
  const auto mc = mc_error_estimate(m6, 0.2, 100000, 17);
  EXPECT_NEAR(mc.mean, exact, 3 * std::sqrt(exact * (1 - exact) / 1e5));
}

TEST(PluginMi, DegenerateSamples) {
  using S = std::pair<int, int>;
  const auto mi = [](const std::vector<S>& v) { return plugin_mi_estimate<int, int>(std::span<const S>(v)); };
  EXPECT_EQ(mi(std::vector<S>(10, S{1, 2})), 0.0);
  EXPECT_EQ(mi({S{3, 4}}), 0.0);
  EXPECT_EQ(mi({}), 0.0);
  EXPECT_NEAR(mi({{0, 0}, {1, 1}, {0, 0}, {1, 1}}), 1.0, 1e-15);
}

TEST(Entropy, BinaryEntropyBasics) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_NEAR(1.0 - binary_entropy(0.11), oracles()["bsc_capacity_011"].get<double>(), 1e-13);
  EXPECT_DNAWT_ERROR(binary_entropy_derivative(0.0), DomainError);
}
