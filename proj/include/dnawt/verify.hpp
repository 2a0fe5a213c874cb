#pragma once

// Verification suite over the analysis oracles. Each claim yields a verdict;
// callers decide how to report them.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dnawt/capacity.hpp"
#include "dnawt/codec.hpp"
#include "dnawt/component_channels.hpp"
#include "dnawt/converse.hpp"
#include "dnawt/counting.hpp"
#include "dnawt/leakage.hpp"
#include "dnawt/rng.hpp"

namespace dnawt {

struct Verdict {
  std::string claim;
  bool passed;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  // Perturbs one degrading-matrix entry by 1e-9 so the exact identity must fail.
  bool inject_fault = false;
};

inline std::vector<Rational> quarter_grid() {
  return {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
}

struct DegradationOutcome {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string first_failure;
};

/// Exact check of Eve = Q o Bob for both component models, all M <= max_M and
/// every grid pair with q0 >= p0 and p0 < 1.
inline DegradationOutcome check_degradation(std::size_t max_M, bool inject_fault = false) {
  DegradationOutcome out;
  const auto grid = quarter_grid();
  for (std::size_t M = 1; M <= max_M; ++M) {
    for (const auto& p0 : grid) {
      for (const auto& q0 : grid) {
        if (q0 < p0 || p0 == Rational(1)) continue;
        const auto bob = bob_component_matrix<Rational>(M, p0);

        auto q = degrading_matrix<Rational>(M, p0, q0);
        if (inject_fault && M == max_M) q(M, 0) += Rational(1, 1000000000);
        const bool presence_ok = compose(bob, q) == eve_component_matrix<Rational>(M, q0);

        const auto qb = degrading_matrix_bernoulli<Rational>(M, p0, q0);
        const bool bernoulli_ok = compose(bob, qb) == eve_component_matrix_bernoulli<Rational>(M, q0);

        out.checked += 2;
        for (bool ok : {presence_ok, bernoulli_ok}) {
          if (ok) continue;
          if (out.failed++ == 0) {
            out.first_failure = "M=" + std::to_string(M) + " p0=" + p0.str() + " q0=" + q0.str() +
                                (presence_ok ? " (bernoulli)" : " (presence)");
          }
        }
      }
    }
  }
  return out;
}

struct CapacityConsistency {
  std::size_t points = 0;
  double worst_keyed_vs_plain = 0.0;
  double worst_reduction = 0.0;
  std::size_t above_storage = 0;
};

/// Keyed formula at R_K = 0 vs the plain one, keyed <= storage capacity, and
/// the indexed reduction identity, on a deterministic 10x10x10 grid.
inline CapacityConsistency check_capacity_consistency() {
  CapacityConsistency c;
  for (int ib = 0; ib < 10; ++ib) {
    const double beta = 1.25 + 0.5 * ib;
    const double share = payload_share(beta);
    for (int ip = 0; ip < 10; ++ip) {
      const double p0 = ip / 9.0;
      for (int iq = 0; iq < 10; ++iq) {
        const double q0 = iq / 9.0;
        const double r_key = 0.05 * ((ib + ip + iq) % 7);
        ++c.points;
        const double keyed = secure_storage_capacity_keyed({beta, p0, q0, r_key});
        if (keyed > storage_capacity(beta, p0) + 1e-15) ++c.above_storage;
        if (q0 >= p0) {
          const double diff =
              std::abs(secure_storage_capacity_keyed({beta, p0, q0, 0.0}) - secure_storage_capacity(beta, p0, q0));
          c.worst_keyed_vs_plain = std::max(c.worst_keyed_vs_plain, diff);
        }
        const double reduced = share * bewtc_secrecy_capacity(p0, q0, r_key / share);
        c.worst_reduction = std::max(c.worst_reduction, std::abs(reduced - keyed));
      }
    }
  }
  return c;
}

/// Brute-force count of integer vectors s >= b with sum n.
inline std::uint64_t brute_force_supervectors(const std::vector<std::int64_t>& b, std::int64_t n) {
  std::uint64_t count = 0;
  const std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i + 1 == b.size()) {
      if (left >= b[i]) ++count;
      return;
    }
    for (std::int64_t s = b[i]; s <= left; ++s) rec(i + 1, left - s);
  };
  rec(0, n);
  return count;
}

struct CountingOutcome {
  std::size_t cases = 0;
  std::size_t mismatches = 0;
};

inline CountingOutcome check_counting(std::size_t max_ell = 4, std::int64_t max_n = 10, std::int64_t max_entry = 3) {
  CountingOutcome out;
  for (std::size_t ell = 1; ell <= max_ell; ++ell) {
    std::vector<std::int64_t> b(ell, 0);
    while (true) {
      for (std::int64_t n = 0; n <= max_n; ++n) {
        ++out.cases;
        if (count_supervectors(b, n) != brute_force_supervectors(b, n)) ++out.mismatches;
      }
      std::size_t i = 0;
      while (i < ell && b[i] == max_entry) b[i++] = 0;
      if (i == ell) break;
      ++b[i];
    }
  }
  return out;
}

/// Uniform random point of the simplex (m_0, ..., m_M).
inline SimplexPoint random_simplex_point(std::size_t M, SplitMix64& rng) {
  SimplexPoint p{std::vector<double>(M + 1)};
  double total = 0.0;
  for (auto& x : p.m) {
    x = -std::log1p(-rng.uniform01());
    total += x;
  }
  for (auto& x : p.m) x /= total;
  double fix = 1.0;
  for (std::size_t j = 1; j <= M; ++j) fix -= p.m[j];
  p.m[0] = std::max(0.0, fix);
  return p;
}

namespace detail {

template <class F>
Verdict timed(const std::string& claim, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v = body();
  v.claim = claim;
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace detail

inline std::vector<Verdict> run_verify_suite(const VerifyOptions& opt = {}) {
  std::vector<Verdict> out;

  out.push_back(detail::timed("degradation identities (presence and bernoulli Eve), exact, M<=20", [&] {
    const auto r = check_degradation(20, opt.inject_fault);
    return Verdict{"", r.failed == 0,
                   std::to_string(r.checked) + " identities, " + std::to_string(r.failed) + " failed" +
                       (r.failed ? "; first " + r.first_failure : "")};
  }));

  out.push_back(detail::timed("binary vertex maximizes the entropy difference, M<=4", [&] {
    SplitMix64 rng(derive_seed(opt.seed, 1));
    std::size_t runs = 0, failures = 0;
    for (double delta : {1e-3, 1e-2}) {
      for (int i = 0; i < 5; ++i) {
        double p0 = rng.uniform01(), q0 = rng.uniform01();
        if (q0 < p0) std::swap(p0, q0);
        for (std::size_t M = 1; M <= 4; ++M) {
          ++runs;
          if (!prop1_vertex_check(M, delta, p0, q0, 100).passes()) ++failures;
        }
      }
    }
    return Verdict{"", failures == 0, std::to_string(runs) + " grid searches, " + std::to_string(failures) + " failed"};
  }));

  out.push_back(detail::timed("uniform derivative margin positive for small delta", [&] {
    const double margin = lemma2_margin(1e-6, 0.5);
    const double slack = lemma2_sampled_slack(6, 1e-6, 0.5, 20000, derive_seed(opt.seed, 2));
    return Verdict{"", margin > 0.0 && slack >= 0.0,
                   "margin " + detail::fmt(margin) + ", sampled slack " + detail::fmt(slack)};
  }));

  out.push_back(detail::timed("KKT multiplier solves its equation with lambda <= 1", [&] {
    double worst = 0.0, worst_value = 0.0;
    bool bounded = true;
    for (std::size_t M = 2; M <= 64; ++M) {
      const auto s = kkt_maximizer(M, 1e-3);
      worst = std::max(worst, std::abs(kkt_residual(M, s.lambda)));
      worst_value = std::max(worst_value, std::abs(s.value - s.formula_value));
      bounded = bounded && s.lambda > 0.0 && s.lambda <= 1.0;
    }
    return Verdict{"", worst <= 1e-12 && worst_value <= 1e-12 && bounded,
                   "max residual " + detail::fmt(worst) + ", max |value - lambda delta| " + detail::fmt(worst_value)};
  }));

  out.push_back(detail::timed("grouping residual within [0, sum j m_j]", [&] {
    SplitMix64 rng(derive_seed(opt.seed, 3));
    std::size_t violations = 0, points = 0;
    for (std::size_t M = 1; M <= 8; ++M) {
      for (int i = 0; i < 1000; ++i) {
        const auto pt = random_simplex_point(M, rng);
        const double p0 = rng.uniform01();
        const double r = grouping_residual(pt, p0);
        ++points;
        if (r < 0.0 || r > pt.delta() + 1e-12) ++violations;
      }
    }
    return Verdict{"", violations == 0, std::to_string(points) + " points, " + std::to_string(violations) + " violations"};
  }));

  out.push_back(detail::timed("supervector count matches brute force", [&] {
    const auto r = check_counting();
    return Verdict{"", r.mismatches == 0, std::to_string(r.cases) + " cases, " + std::to_string(r.mismatches) + " mismatches"};
  }));

  out.push_back(detail::timed("capacity formulas mutually consistent", [&] {
    const auto c = check_capacity_consistency();
    const bool ok = c.worst_keyed_vs_plain <= 1e-12 && c.worst_reduction <= 1e-12 && c.above_storage == 0;
    return Verdict{"", ok,
                   std::to_string(c.points) + " points, keyed/plain gap " + detail::fmt(c.worst_keyed_vs_plain) +
                       ", reduction gap " + detail::fmt(c.worst_reduction)};
  }));

  out.push_back(detail::timed("one-time pad leaks nothing", [&] {
    double worst = 0.0;
    for (std::size_t N : {2u, 3u, 8u, 17u, 64u}) {
      const auto profile = erasure_profile(make_otp_codebook(3, 2, N, derive_seed(opt.seed, 10 + N)));
      for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) worst = std::max(worst, profile.mutual_information(eps));
    }
    return Verdict{"", worst <= 1e-12, "max leakage " + detail::fmt(worst) + " bits"};
  }));

  out.push_back(detail::timed("entropy ratio follows its first-order expansion", [&] {
    double worst = 0.0;
    for (int i = 0; i <= 5; ++i) {
      for (int j = i; j <= 5; ++j) {
        const double p0 = 0.2 * i, q0 = 0.2 * j;
        for (double x : {1e-4, 1e-6, 1e-8}) {
          const double predicted = (q0 - p0) + entropy_ratio_gap_coefficient(p0, q0) / -std::log2(x);
          worst = std::max(worst, std::abs(entropy_ratio(x, p0, q0) - predicted));
        }
      }
    }
    return Verdict{"", worst <= 1e-3, "max deviation " + detail::fmt(worst)};
  }));

  return out;
}

inline bool all_passed(const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts) {
    if (!v.passed) return false;
  }
  return true;
}

}  // namespace dnawt
