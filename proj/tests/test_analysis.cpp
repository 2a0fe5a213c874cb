#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "dnawt/capacity.hpp"
#include "dnawt/component_channels.hpp"
#include "dnawt/converse.hpp"
#include "dnawt/counting.hpp"
#include "dnawt/entropy.hpp"
#include "dnawt/erasure_probs.hpp"
#include "dnawt/verify.hpp"
#include "support.hpp"

using namespace dnawt;
using dnawt::test::oracles;

// ---- capacity formulas -----------------------------------------------------

TEST(Capacity, StorageCapacity) {
  EXPECT_DOUBLE_EQ(storage_capacity(2, 0), 0.5);
  EXPECT_DOUBLE_EQ(storage_capacity(2, 1), 0.0);
  EXPECT_NEAR(storage_capacity(2, 0.4), 0.3, 1e-15);
  EXPECT_DNAWT_ERROR(storage_capacity(1.0, 0.1), BetaOutOfRange);
}

TEST(Capacity, SecureStorageCapacity) {
  EXPECT_NEAR(secure_storage_capacity(2, 0.1, 0.6), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(secure_storage_capacity(2, 0.3, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(secure_storage_capacity(2, 0, 1), 0.5);
  EXPECT_DNAWT_ERROR(secure_storage_capacity(2, 0.6, 0.1), OrderViolation);
}

TEST(Capacity, KeyedAndBewtc) {
  EXPECT_NEAR(secure_storage_capacity_keyed({2, 0.1, 0.6, 0.2}), 0.45, 1e-15);
  EXPECT_NEAR(secure_storage_capacity_keyed({2, 0.5, 0.2, 0.1}), 0.1, 1e-15);
  EXPECT_NEAR(bewtc_secrecy_capacity(0.1, 0.6, 0), 0.5, 1e-15);
  EXPECT_NEAR(bewtc_secrecy_capacity(0.6, 0.2, 0.3), 0.3, 1e-15);
  EXPECT_NEAR(bewtc_secrecy_capacity(0.1, 0.6, 1.0), 0.9, 1e-15);
}

TEST(Capacity, ConsistencyProperties) {
  const auto c = check_capacity_consistency();
  EXPECT_EQ(c.points, 1000u);
  EXPECT_LE(c.worst_keyed_vs_plain, 1e-12);
  EXPECT_LE(c.worst_reduction, 1e-12);
  EXPECT_EQ(c.above_storage, 0u);
  for (double beta : {1.5, 2.0, 4.0})
    for (int i = 0; i <= 10; ++i)
      for (int j = i; j <= 10; ++j) {
        const double p0 = i / 10.0, q0 = j / 10.0;
        const double plain = secure_storage_capacity(beta, p0, q0);
        EXPECT_GE(plain, 0.0);
        EXPECT_LE(plain, 1.0 - 1.0 / beta + 1e-15);
        EXPECT_NEAR(secure_storage_capacity_keyed({beta, p0, q0, 0.0}), plain, 1e-15);
      }
}

// ---- oligo erasure probabilities -------------------------------------------

TEST(ErasureProbs, ThetaSmallExamples) {
  const auto& o = oracles()["theta_small"];
  const auto model = MixModel::from_background(1, 1, 9, 2);  // N_tot = 10
  EXPECT_NEAR(theta_exact(model, 1), o["num"].get<double>() / o["den"].get<double>(), 1e-15);
  EXPECT_EQ(theta_exact(model, 0), 1.0);
  EXPECT_EQ(theta_exact(MixModel::from_background(1, 1, 9, 10), 1), 0.0);
  EXPECT_DNAWT_ERROR(MixModel::from_background(1, 1, 9, 11), DomainError);
}

TEST(ErasureProbs, ThetaMatchesHighPrecisionOracle) {
  for (const auto& c : oracles()["theta"]) {
    const auto model = MixModel::from_rho(c["M"], c["kappa_bar"], c["rho"], c["N_r"]);
    const double expected = c["theta"];
    EXPECT_NEAR(theta_exact(model, c["s"]), expected, 1e-9 * expected + 1e-300)
        << "M=" << c["M"] << " N_r=" << c["N_r"] << " s=" << c["s"];
  }
}

TEST(ErasureProbs, MixedSampleReferenceValues) {
  EXPECT_NEAR(eve_erasure_prob(1e-5, 5e8, 1e4), 0.6065, 5e-4);
  EXPECT_NEAR(bob_erasure_prob(0.1, 1e6, 1e4), 4.5e-5, 0.05 * 4.5e-5);
  EXPECT_NEAR(eve_erasure_prob(0.0, 5e8, 1e4), 1.0, 0.0);
  EXPECT_EQ(bob_erasure_prob(0.1, 0, 1e4), 1.0);
  EXPECT_EQ(bob_erasure_prob(1.0, 1, 1), 0.0);
}

TEST(ErasureProbs, ApproximationsAgreeWithThetaInTheirRegimes) {
  const auto eve = MixModel::from_rho(1e4, 100, 1e-5, 5e8);
  EXPECT_TRUE(eve_regime(eve.rho()));
  EXPECT_NEAR(eve_erasure_prob(eve.rho(), eve.N_r, eve.M) / theta_exact(eve, 1), 1.0, 0.01);
  const auto bob = MixModel::from_rho(1e4, 1e4, 0.1, 1e6);
  EXPECT_TRUE(bob_regime(bob.rho()));
  EXPECT_NEAR(bob_erasure_prob(bob.rho(), bob.N_r, bob.M) / theta_exact(bob, 1), 1.0, 0.02);
}

// ---- component channels ----------------------------------------------------

TEST(ComponentChannels, RowsAndStochasticity) {
  const Rational p(1, 3);
  const auto bob = bob_component_matrix<Rational>(2, p);
  EXPECT_EQ(bob(2, 0), p * p);
  EXPECT_EQ(bob(2, 1), 2 * p * (1 - p));
  EXPECT_EQ(bob(2, 2), (1 - p) * (1 - p));
  const auto eve = eve_component_matrix<Rational>(5, Rational(2, 7));
  EXPECT_EQ(eve(0, 0), Rational(1));
  EXPECT_EQ(eve(0, 1), Rational(0));
  for (std::size_t M = 1; M <= 20; ++M) {
    EXPECT_TRUE(bob_component_matrix<Rational>(M, Rational(3, 10)).is_stochastic());
    EXPECT_TRUE(eve_component_matrix<Rational>(M, Rational(3, 10)).is_stochastic());
    EXPECT_TRUE(eve_component_matrix_bernoulli<Rational>(M, Rational(3, 10)).is_stochastic());
  }
}

TEST(ComponentChannels, DegradingMatrices) {
  const Rational p0(1, 5), q0(1, 2);
  EXPECT_EQ(compose(bob_component_matrix<Rational>(2, p0), degrading_matrix<Rational>(2, p0, q0)),
            eve_component_matrix<Rational>(2, q0));
  const Rational a(1, 4), b(1, 2);
  EXPECT_EQ(compose(bob_component_matrix<Rational>(3, a), degrading_matrix_bernoulli<Rational>(3, a, b)),
            eve_component_matrix_bernoulli<Rational>(3, b));

  const auto same = degrading_matrix<Rational>(4, p0, p0);
  EXPECT_EQ(same(0, 0), Rational(1));
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(same(k, 1), Rational(1));
  const auto ident = degrading_matrix_bernoulli<Rational>(4, p0, p0);
  for (std::size_t i = 0; i <= 4; ++i)
    for (std::size_t j = 0; j <= 4; ++j) EXPECT_EQ(ident(i, j), Rational(i == j ? 1 : 0));
  const auto kill = degrading_matrix_bernoulli<Rational>(4, p0, Rational(1));
  for (std::size_t i = 0; i <= 4; ++i) EXPECT_EQ(kill(i, 0), Rational(1));
  EXPECT_DNAWT_ERROR(degrading_matrix<Rational>(3, q0, p0), OrderViolation);
  EXPECT_DNAWT_ERROR(degrading_matrix_bernoulli<Rational>(3, q0, p0), OrderViolation);
}

TEST(ComponentChannels, ExactDegradationGrid) {
  const auto r = check_degradation(20);
  EXPECT_EQ(r.failed, 0u) << r.first_failure;
  EXPECT_EQ(r.checked, 2u * 20u * 14u);
  const auto bad = check_degradation(6, true);
  EXPECT_GT(bad.failed, 0u);
}

TEST(ComponentChannels, ExactProbabilityParsing) {
  EXPECT_EQ(exact_probability("1/5"), Rational(1, 5));
  EXPECT_EQ(exact_probability("0.25"), Rational(1, 4));
  EXPECT_EQ(exact_probability("2.5e-1"), Rational(1, 4));
  EXPECT_EQ(exact_probability("010/0100"), Rational(1, 10));
  EXPECT_EQ(exact_probability("0"), Rational(0));
  EXPECT_DNAWT_ERROR(exact_probability("pi/4"), IrrationalInput);
  EXPECT_DNAWT_ERROR(exact_probability("sqrt(2)/2"), IrrationalInput);
}

// ---- converse objective ----------------------------------------------------

TEST(Objective, DeterministicInputIsZero) {
  SimplexPoint p{std::vector<double>(5, 0.0)};
  p.m[0] = 1.0;
  EXPECT_NEAR(objective_f(p, 0.3, 0.7).value(), 0.0, 1e-15);
  EXPECT_DNAWT_ERROR(objective_f(p, 0.0, 0.7), DegenerateProbability);
  EXPECT_DNAWT_ERROR(objective_f(p, 0.3, 1.0), DegenerateProbability);
}

TEST(Objective, MatchesDirectChannelMutualInformation) {
  for (const auto& c : oracles()["component_objective"]) {
    const SimplexPoint p{c["m"].get<std::vector<double>>()};
    const auto t = objective_f(p, c["p0"], c["q0"]);
    EXPECT_NEAR(t.value(), c["value"].get<double>(), 1e-12);
  }
  // M = 1 closed form: h(delta(1-p0)) - delta h(p0) - h(1 - delta(1-q0)) + delta h(q0).
  const double d = 0.2, p0 = 0.3, q0 = 0.8;
  const auto t = objective_f(SimplexPoint::vertex(1, d), p0, q0);
  const double closed = binary_entropy(d * (1 - p0)) - d * binary_entropy(p0) - binary_entropy(d * (1 - q0)) +
                        d * binary_entropy(q0);
  EXPECT_NEAR(t.value(), closed, 1e-14);
}

TEST(Objective, GroupingResidual) {
  SplitMix64 rng(3);
  for (std::size_t M = 1; M <= 8; ++M)
    for (int i = 0; i < 1000; ++i) {
      const auto pt = random_simplex_point(M, rng);
      const double p0 = 0.01 + 0.98 * rng.uniform01();
      const double r = grouping_residual(pt, p0);
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, pt.delta() + 1e-12);
      double survive = 0.0;
      for (std::size_t j = 0; j <= M; ++j) survive += pt.m[j] * (1.0 - std::pow(p0, double(j)));
      const double H = entropy_bits(bob_output_distribution(pt, p0));
      EXPECT_NEAR(r, H - binary_entropy(survive), 1e-12);
    }
  const SimplexPoint two{{0.7, 0.3}};
  EXPECT_NEAR(grouping_residual(two, 0.4), 0.0, 1e-15);
  const SimplexPoint ex{{0.9, 0.05, 0.03, 0.02}};
  EXPECT_LE(grouping_residual(ex, 0.3), 0.17);
  EXPECT_GT(grouping_residual(ex, 0.3), 0.0);
}

TEST(Kkt, LambdaOracleAndBounds) {
  EXPECT_NEAR(kkt_lambda(2), -std::log2((std::sqrt(5.0) - 1) / 2), 1e-12);
  for (const auto& [M, lam] : oracles()["kkt_lambda"].items())
    EXPECT_NEAR(kkt_lambda(std::stoul(M)), lam.get<double>(), 1e-12) << M;
  double prev = 0.0;
  for (std::size_t M = 2; M <= 64; ++M) {
    const double lam = kkt_lambda(M);
    EXPECT_GE(lam, prev);
    EXPECT_LE(lam, 1.0);
    EXPECT_LE(std::abs(kkt_residual(M, lam)), 1e-12);
    const auto s = kkt_maximizer(M, 1e-3);
    EXPECT_NEAR(s.value, s.formula_value, 1e-12);
    prev = lam;
  }
  EXPECT_GT(kkt_lambda(60), 1.0 - 1e-12);
  EXPECT_DNAWT_ERROR(kkt_lambda(1), DegenerateM);
}

namespace {

// Plain enumeration of the lambda grid, no pruning.
double prop1_brute(std::size_t M, double delta, double p0, double q0, std::size_t R) {
  double best = -1e300;
  std::vector<std::size_t> c(M, 0);
  const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t left) {
    if (j + 1 == M) {
      c[j] = left;
      double A = 0, B = 0;
      for (std::size_t i = 0; i < M; ++i) {
        const double lam = double(c[i]) / double(R), jj = double(i + 1);
        A += lam * (1 - std::pow(p0, jj)) / jj;
        B += lam * (1 - std::pow(q0, jj)) / jj;
      }
      best = std::max(best, binary_entropy(delta * A) - binary_entropy(delta * B));
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      c[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(0, R);
  return best;
}

}  // namespace

TEST(VertexSearch, MatchesOracleAtResolution200) {
  const auto& o = oracles()["prop1"];
  const auto r = prop1_vertex_check(o["M"], o["delta"], o["p0"], o["q0"], o["resolution"]);
  EXPECT_NEAR(r.max_value, o["max_value"].get<double>(), 1e-13);
  EXPECT_TRUE(r.passes());
  EXPECT_TRUE(r.argmax_is_vertex());
  EXPECT_EQ(r.argmax_counts, o["argmax"].get<std::vector<std::size_t>>());
}

TEST(VertexSearch, BranchAndBoundEqualsBruteForce) {
  SplitMix64 rng(17);
  for (int i = 0; i < 30; ++i) {
    const std::size_t M = 1 + rng.below(6);
    double p0 = rng.uniform01(), q0 = rng.uniform01();
    if (q0 < p0) std::swap(p0, q0);
    const double delta = rng.bernoulli(0.5) ? 1e-2 : 0.3;
    const auto r = prop1_vertex_check(M, delta, p0, q0, 30);
    EXPECT_NEAR(r.max_value, prop1_brute(M, delta, p0, q0, 30), 1e-12);
  }
}

TEST(VertexSearch, SpecialCases) {
  const auto tie = prop1_vertex_check(4, 1e-2, 0.4, 0.4, 50);
  EXPECT_NEAR(tie.max_value, 0.0, 1e-15);
  EXPECT_TRUE(tie.passes());
  // q0 = 1: h(delta A) <= h(delta (1-p0)) since A <= 1-p0 on the lambda simplex.
  for (double p0 : {0.1, 0.5, 0.9}) {
    const auto r = prop1_vertex_check(5, 1e-3, p0, 1.0, 60);
    EXPECT_TRUE(r.passes());
    EXPECT_NEAR(r.vertex_value, binary_entropy(1e-3 * (1 - p0)), 1e-15);
  }
  EXPECT_DNAWT_ERROR(prop1_vertex_check(3, 0.9, 0.1, 0.5, 10), DeltaTooLarge);
  EXPECT_DNAWT_ERROR(prop1_vertex_check(3, 0.01, 0.5, 0.1, 10), OrderViolation);
}

TEST(DerivativeMargin, SignAndMonotonicity) {
  const auto& o = oracles()["lemma2_margin"];
  EXPECT_GT(lemma2_margin(1e-6, 0.5), 0.0);
  EXPECT_NEAR(lemma2_margin(1e-6, 0.5), o[0]["value"].get<double>(), 1e-12);
  EXPECT_LT(lemma2_margin(0.4, 0.9), 0.0);
  EXPECT_NEAR(lemma2_margin(0.4, 0.9), o[1]["value"].get<double>(), 1e-12);
  EXPECT_NEAR(binary_entropy_derivative(1e-6), 19.93, 0.01);
  double prev = std::numeric_limits<double>::infinity();
  for (double d = 1e-4; d < 0.5; d += 0.01) {
    EXPECT_LT(lemma2_margin(d, 0.3), prev);
    prev = lemma2_margin(d, 0.3);
  }
  EXPECT_DNAWT_ERROR(lemma2_margin(0.1, 1.0), DegenerateQ);
  EXPECT_GE(lemma2_sampled_slack(5, 1e-6, 0.5, 5000, 2), 0.0);
}

TEST(EntropyRatio, OracleValuesAndConvergence) {
  for (const auto& c : oracles()["entropy_ratio"])
    EXPECT_NEAR(entropy_ratio(c["x"], c["p0"], c["q0"]), c["value"].get<double>(), 1e-12);
  for (double x : {1e-3, 0.1, 0.4}) EXPECT_NEAR(entropy_ratio(x, 0.3, 0.3), 0.0, 1e-15);
  EXPECT_NEAR(entropy_ratio(1e-6, 0.0, 1.0), 1.0, 0.1);
  double prev_gap = 1e9;
  for (int e = 2; e <= 300; e += 2) {
    const double gap = std::abs(entropy_ratio(std::pow(10.0, -e), 0.0, 1.0) - 1.0);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
}

TEST(EntropyRatio, FirstOrderExpansion) {
  for (int i = 0; i <= 5; ++i)
    for (int j = i; j <= 5; ++j) {
      const double p0 = 0.2 * i, q0 = 0.2 * j;
      const double x = 1e-12;
      const double pred = (q0 - p0) + entropy_ratio_gap_coefficient(p0, q0) / -std::log2(x);
      EXPECT_NEAR(entropy_ratio(x, p0, q0), pred, 1e-4);
    }
  EXPECT_NEAR(entropy_ratio_gap_coefficient(0, 1), std::numbers::log2e, 1e-15);
}

// ---- counting --------------------------------------------------------------

TEST(Counting, Supervectors) {
  for (const auto& c : oracles()["supervectors"]) {
    const auto b = c["b"].get<std::vector<std::int64_t>>();
    EXPECT_EQ(count_supervectors(b, c["n"]), c["count"].get<int>());
  }
  const std::vector<std::int64_t> zero(3, 0);
  EXPECT_EQ(count_supervectors(zero, 0), 1);
  EXPECT_EQ(check_counting().mismatches, 0u);
  const std::vector<std::int64_t> big(50, 1);
  EXPECT_EQ(count_supervectors(big, 1000), binomial(1000 - 50 + 49, 49));
  EXPECT_GT(binomial(1000, 500), BigInt(1) << 900);
}

// ---- finite-M rate bound --------------------------------------------------

TEST(FiniteRateBound, OracleValuesAndTrend) {
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& c : oracles()["appc"]) {
    const double M = c["M"];
    const double v = appc_rate_bound(M, 2.0 * std::log2(M), c["p0"], c["q0"], c["delta"]);
    EXPECT_NEAR(v, c["value"].get<double>(), 1e-12 * v);
    EXPECT_LT(v, prev);
    prev = v;
  }
  const double limit = appc_rate_limit(2.0, 0.1, 0.6, 0.05);
  EXPECT_NEAR(limit, 0.3, 1e-15);
  const double far = appc_rate_bound(std::pow(2.0, 40), 80.0, 0.1, 0.6, 0.05);
  EXPECT_GT(far, limit);
  EXPECT_LT(far - limit, 0.02);
  // Huge L where 2^L would overflow a double.
  EXPECT_TRUE(std::isfinite(appc_rate_bound(std::pow(2.0, 600), 1200.0, 0.1, 0.6, 0.05)));
  EXPECT_NEAR(hoeffding_failure_bound(100, 0.1), 4 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(4 * std::exp(-2.0), 0.5413, 1e-4);
  EXPECT_LT(appc_rate_bound(std::pow(2.0, 60), 120.0, 0.3, 0.3, 1e-6), 1e-3);
  EXPECT_DNAWT_ERROR(appc_rate_bound(1024, 20, 0.6, 0.1, 0.05), OrderViolation);
}

TEST(Entropy, Basics) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy_derivative(0.5), 0.0);
  EXPECT_DNAWT_ERROR(binary_entropy(1.5), DomainError);
}

// ---- verification suite ----------------------------------------------------

TEST(VerifySuite, CleanRunPassesAndFaultIsCaught) {
  const auto clean = run_verify_suite();
  EXPECT_EQ(clean.size(), 9u);
  for (const auto& v : clean) EXPECT_TRUE(v.passed) << v.claim << ": " << v.detail;
  const auto faulty = run_verify_suite({1, true});
  EXPECT_FALSE(faulty.front().passed);
  EXPECT_FALSE(all_passed(faulty));
}
