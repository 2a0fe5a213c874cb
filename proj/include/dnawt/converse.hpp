#pragma once

// Numeric oracles for the converse: the single-letter objective over the
// constrained simplex, its grouping decomposition, the KKT solution that
// bounds the grouping residual, the vertex-optimality search, the uniform
// derivative margin, the small-x entropy ratio and the finite-M rate bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dnawt/component_channels.hpp"
#include "dnawt/entropy.hpp"
#include "dnawt/errors.hpp"
#include "dnawt/rng.hpp"

namespace dnawt {

/// Distribution (m_0, ..., m_M) of one component of f_X.
struct SimplexPoint {
  std::vector<double> m;

  static SimplexPoint vertex(std::size_t M, double delta) {
    SimplexPoint p{std::vector<double>(M + 1, 0.0)};
    p.m[0] = 1.0 - delta;
    p.m[1] = delta;
    return p;
  }

  // m_j = delta * lambda_j / j, m_0 takes the rest.
  static SimplexPoint from_lambda(std::span<const double> lambda, double delta) {
    SimplexPoint p{std::vector<double>(lambda.size() + 1, 0.0)};
    double used = 0.0;
    for (std::size_t j = 1; j <= lambda.size(); ++j) {
      p.m[j] = delta * lambda[j - 1] / static_cast<double>(j);
      used += p.m[j];
    }
    p.m[0] = 1.0 - used;
    return p;
  }

  std::size_t M() const noexcept { return m.empty() ? 0 : m.size() - 1; }

  double delta() const noexcept {
    double d = 0.0;
    for (std::size_t j = 1; j < m.size(); ++j) d += static_cast<double>(j) * m[j];
    return d;
  }

  void validate() const {
    require(m.size() >= 2, ErrorKind::InvalidPMF, "simplex point needs M >= 1");
    double sum = 0.0;
    for (double x : m) {
      require(x >= 0.0, ErrorKind::InvalidPMF, "simplex point has a negative entry");
      sum += x;
    }
    require(std::abs(sum - 1.0) <= 1e-12, ErrorKind::InvalidPMF, "simplex point does not sum to 1");
  }
};

/// Distribution of Bob's component output: l_k = sum_{j>=k} m_j C(j,k) (1-p0)^k p0^{j-k}.
inline std::vector<double> bob_output_distribution(const SimplexPoint& point, double p0) {
  const std::size_t M = point.M();
  const auto C = binomial_table<double>(M);
  std::vector<double> l(M + 1, 0.0);
  for (std::size_t j = 0; j <= M; ++j) {
    if (point.m[j] == 0.0) continue;
    for (std::size_t k = 0; k <= j; ++k)
      l[k] += point.m[j] * C[j][k] * std::pow(1.0 - p0, static_cast<double>(k)) *
              std::pow(p0, static_cast<double>(j - k));
  }
  return l;
}

inline double binomial_entropy(std::size_t n, double p) {
  const auto C = binomial_table<double>(n);
  double h = 0.0;
  for (std::size_t k = 0; k <= n; ++k)
    h += neg_plog2p(C[n][k] * std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k)));
  return h;
}

struct ObjectiveTerms {
  double output_entropy;  // H(l_0, ..., l_M)
  double bob_noise;       // sum_j m_j H(Bin(j, p0))
  double eve_output;      // h(sum_j m_j q0^j)
  double eve_noise;       // sum_j m_j h(q0^j)

  double value() const noexcept { return output_entropy - bob_noise - eve_output + eve_noise; }
  double bob_information() const noexcept { return output_entropy - bob_noise; }
  double eve_information() const noexcept { return eve_output - eve_noise; }
};

/// I(f_X; f_Y) - I(f_X; f_Z) for one component, split into its four terms.
inline ObjectiveTerms objective_f(const SimplexPoint& point, double p0, double q0) {
  point.validate();
  require(p0 > 0.0 && p0 < 1.0 && q0 > 0.0 && q0 < 1.0, ErrorKind::DegenerateProbability,
          "objective needs p0, q0 in the open interval (0,1)");
  const auto l = bob_output_distribution(point, p0);
  ObjectiveTerms t{entropy_bits(l), 0.0, 0.0, 0.0};
  double eve_absent = 0.0;
  for (std::size_t j = 0; j <= point.M(); ++j) {
    const double qj = std::pow(q0, static_cast<double>(j));
    t.bob_noise += point.m[j] * binomial_entropy(j, p0);
    t.eve_noise += point.m[j] * binary_entropy(qj);
    eve_absent += point.m[j] * qj;
  }
  t.eve_output = binary_entropy(std::clamp(eve_absent, 0.0, 1.0));
  return t;
}

/// (sum_{i>=1} l_i) H(l~_1, ..., l~_M): the part of H(l) beyond h(l_0).
inline double grouping_residual(const SimplexPoint& point, double p0) {
  point.validate();
  require_probability(p0, "p0");
  const auto l = bob_output_distribution(point, p0);
  double s = 0.0;
  for (std::size_t i = 1; i < l.size(); ++i) s += l[i];
  if (s <= 0.0) return 0.0;
  double h = 0.0;
  for (std::size_t i = 1; i < l.size(); ++i) h += neg_plog2p(l[i] / s);
  return std::max(0.0, s * h);
}

/// Root lambda in (0, 1] of sum_{j=1}^M 2^{-lambda j} = 1.
inline double kkt_lambda(std::size_t M) {
  require(M >= 2, ErrorKind::DegenerateM, "M = 1 gives lambda = 0");
  const auto g = [M](double lambda) {
    const double r = std::exp2(-lambda);
    double acc = 0.0, term = 1.0;
    for (std::size_t j = 1; j <= M; ++j) {
      term *= r;
      acc += term;
    }
    return acc - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

inline double kkt_residual(std::size_t M, double lambda) {
  double acc = 0.0;
  for (std::size_t j = 1; j <= M; ++j) acc += std::exp2(-lambda * static_cast<double>(j));
  return acc - 1.0;
}

struct KktSolution {
  double lambda;
  double C;
  std::vector<double> a;  // a_1..a_M
  double value;           // (sum a) log(sum a) - sum a log a at the maximizer
  double formula_value;   // lambda * delta
};

/// Maximizer of (sum a) H(a / sum a) subject to sum_j j a_j = delta.
inline KktSolution kkt_maximizer(std::size_t M, double delta) {
  require(delta > 0.0, ErrorKind::DomainError, "delta must be positive");
  KktSolution s;
  s.lambda = kkt_lambda(M);
  double weighted = 0.0;
  for (std::size_t j = 1; j <= M; ++j) weighted += static_cast<double>(j) * std::exp2(-s.lambda * static_cast<double>(j));
  s.C = delta / weighted;
  s.a.resize(M);
  double total = 0.0;
  for (std::size_t j = 1; j <= M; ++j) {
    s.a[j - 1] = s.C * std::exp2(-s.lambda * static_cast<double>(j));
    total += s.a[j - 1];
  }
  s.value = total * std::log2(total);
  for (double x : s.a) s.value += neg_plog2p(x);
  s.formula_value = s.lambda * delta;
  return s;
}

struct Prop1Result {
  std::vector<std::size_t> argmax_counts;  // lambda_j = counts[j-1] / resolution
  SimplexPoint argmax;
  double max_value;
  double vertex_value;
  std::size_t resolution;
  std::uint64_t nodes = 0;

  bool passes(double tol = 1e-9) const noexcept { return max_value <= vertex_value + tol; }
  bool argmax_is_vertex() const noexcept {
    return !argmax_counts.empty() && argmax_counts[0] == resolution;
  }
};

/// Grid maximum of h(delta A(lambda)) - h(delta B(lambda)) over the lambda
/// simplex at the given resolution, where A = sum lambda_j (1-p0^j)/j and
/// B = sum lambda_j (1-q0^j)/j.
///
/// Exhaustive over the grid, accelerated by branch and bound: on the
/// sub-simplex of points sharing a prefix, the tangent of the concave
/// h(delta A) at the centroid minus the convex h(delta B) is a convex upper
/// bound, so its maximum sits at a vertex. Subtrees whose bound cannot beat
/// the incumbent by more than 1e-13 are skipped.
inline Prop1Result prop1_vertex_check(std::size_t M, double delta, double p0, double q0, std::size_t resolution) {
  require(M >= 1, ErrorKind::DomainError, "M must be at least 1");
  require(resolution >= 1, ErrorKind::DomainError, "resolution must be positive");
  require(delta > 0.0 && delta < 1.0, ErrorKind::DomainError, "delta must lie in (0,1)");
  require_probability(p0, "p0");
  require_probability(q0, "q0");
  require(q0 >= p0, ErrorKind::OrderViolation, "needs q0 >= p0");
  require(delta * (1.0 - p0) <= 0.5, ErrorKind::DeltaTooLarge, "delta (1 - p0) exceeds 1/2");

  std::vector<double> a(M), b(M);
  for (std::size_t j = 1; j <= M; ++j) {
    a[j - 1] = (1.0 - std::pow(p0, static_cast<double>(j))) / static_cast<double>(j);
    b[j - 1] = (1.0 - std::pow(q0, static_cast<double>(j))) / static_cast<double>(j);
  }
  const double R = static_cast<double>(resolution);
  const auto objective = [&](double A, double B) { return binary_entropy(delta * A) - binary_entropy(delta * B); };

  Prop1Result res;
  res.resolution = resolution;
  res.vertex_value = objective(a[0], b[0]);
  res.max_value = res.vertex_value;
  res.argmax_counts.assign(M, 0);
  res.argmax_counts[0] = resolution;

  std::vector<std::size_t> counts(M, 0);
  constexpr double kPruneSlack = 1e-13;

  // Visits all grid points with counts[0..depth) fixed, `left` units still to place.
  const auto explore = [&](auto&& self, std::size_t depth, std::size_t left, double A, double B) -> void {
    ++res.nodes;
    if (depth == M - 1) {
      counts[depth] = left;
      const double An = A + static_cast<double>(left) / R * a[depth];
      const double Bn = B + static_cast<double>(left) / R * b[depth];
      const double v = objective(An, Bn);
      if (v > res.max_value) {
        res.max_value = v;
        res.argmax_counts = counts;
      }
      counts[depth] = 0;
      return;
    }
    if (left > 0 && depth > 0) {
      const double w = static_cast<double>(left) / R;
      double Ac = 0.0;
      for (std::size_t j = depth; j < M; ++j) Ac += A + w * a[j];
      Ac /= static_cast<double>(M - depth);
      const double y = delta * Ac;
      if (y > 0.0 && y < 1.0) {
        const double h0 = binary_entropy(y);
        const double slope = binary_entropy_derivative(y) * delta;
        double bound = -std::numeric_limits<double>::infinity();
        for (std::size_t j = depth; j < M; ++j) {
          const double Av = A + w * a[j];
          const double Bv = B + w * b[j];
          bound = std::max(bound, h0 + slope * (Av - Ac) - binary_entropy(delta * Bv));
        }
        if (bound <= res.max_value + kPruneSlack) return;
      }
    }
    for (std::size_t k = left + 1; k-- > 0;) {
      counts[depth] = k;
      const double frac = static_cast<double>(k) / R;
      self(self, depth + 1, left - k, A + frac * a[depth], B + frac * b[depth]);
    }
    counts[depth] = 0;
  };
  if (M == 1) {
    counts[0] = resolution;
  } else {
    explore(explore, 0, resolution, 0.0, 0.0);
  }

  std::vector<double> lambda(M);
  for (std::size_t j = 0; j < M; ++j) lambda[j] = static_cast<double>(res.argmax_counts[j]) / R;
  res.argmax = SimplexPoint::from_lambda(lambda, delta);
  return res;
}

/// (1 - q0) h'(delta) - log2(e) / ((1 - q0)(1 - delta)); positive certifies
/// the derivative comparison uniformly in x and lambda.
inline double lemma2_margin(double delta, double q0) {
  require(q0 != 1.0, ErrorKind::DegenerateQ, "q0 = 1");
  require(q0 >= 0.0 && q0 < 1.0, ErrorKind::DomainError, "q0 must lie in [0,1)");
  require(delta > 0.0 && delta < 1.0, ErrorKind::DomainError, "delta must lie in (0,1)");
  return (1.0 - q0) * binary_entropy_derivative(delta) - kLog2E / ((1.0 - q0) * (1.0 - delta));
}

/// Smallest observed h'(delta (1-x)) - (sum lambda_j x^{j-1}) h'(delta sum lambda_j (1-x^j)/j)
/// over random x in [0, q0] and random lambda; non-negative means u' >= v' held.
inline double lemma2_sampled_slack(std::size_t M, double delta, double q0, std::size_t samples, std::uint64_t seed) {
  require(q0 != 1.0, ErrorKind::DegenerateQ, "q0 = 1");
  require(M >= 1 && q0 >= 0.0 && q0 < 1.0 && delta > 0.0 && delta < 1.0, ErrorKind::DomainError,
          "needs M >= 1, q0 in [0,1), delta in (0,1)");
  SplitMix64 rng(seed);
  std::vector<double> lambda(M);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = q0 * rng.uniform01();
    double total = 0.0;
    for (auto& v : lambda) {
      v = -std::log1p(-rng.uniform01());
      total += v;
    }
    double slope = 0.0, arg = 0.0, xp = 1.0;
    for (std::size_t j = 1; j <= M; ++j) {
      const double lj = lambda[j - 1] / total;
      slope += lj * xp;
      xp *= x;
      arg += lj * (1.0 - xp) / static_cast<double>(j);
    }
    const double psi = slope * binary_entropy_derivative(delta * arg);
    worst = std::min(worst, binary_entropy_derivative(delta * (1.0 - x)) - psi);
  }
  return worst;
}

/// [h((1-p0) x) - h((1-q0) x)] / (-x log2 x).
inline double entropy_ratio(double x, double p0, double q0) {
  require(x > 0.0 && x < 0.5, ErrorKind::DomainError, "x must lie in (0, 1/2)");
  require_probability(p0, "p0");
  require_probability(q0, "q0");
  return (binary_entropy((1.0 - p0) * x) - binary_entropy((1.0 - q0) * x)) / (-x * std::log2(x));
}

/// Coefficient c with entropy_ratio(x) = (q0 - p0) + c / log2(1/x) + O(x).
inline double entropy_ratio_gap_coefficient(double p0, double q0) {
  require_probability(p0, "p0");
  require_probability(q0, "q0");
  const double a = 1.0 - p0;
  const double b = 1.0 - q0;
  return (a - b) * kLog2E + neg_plog2p(a) - neg_plog2p(b);
}

namespace detail {

// log2(2^x + 2^y)
inline double log2_add(double x, double y) {
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  if (lo == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

}  // namespace detail

inline double hoeffding_failure_bound(double M, double delta) { return 4.0 * std::exp(-2.0 * M * delta * delta); }

/// Finite-M upper bound on the secure rate (bits per stored symbol) from the
/// frequency-vector counting argument with Bernoulli Eve.
inline double appc_rate_bound(double M, double L, double p0, double q0, double delta) {
  require_probability(p0, "p0");
  require_probability(q0, "q0");
  require(q0 >= p0, ErrorKind::OrderViolation, "needs q0 >= p0");
  require(delta > 0.0, ErrorKind::DomainError, "delta must be positive");
  require(M >= 1.0 && L > std::log2(M), ErrorKind::DomainError, "needs L > log2 M");
  const double spread = M * (q0 - p0 + 2.0 * delta);
  const double denom = spread - 2.0;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  const double p_fail = std::min(1.0, hoeffding_failure_bound(M, delta));
  const double p_good = 1.0 - p_fail;
  // log2(e (1 + 2^L / denom)) and log2(e (M + 2^L - 1) / M), kept in log space.
  const double typical = kLog2E + detail::log2_add(0.0, L - std::log2(denom));
  const double atypical = kLog2E + detail::log2_add(std::log2(M - 1.0), L) - std::log2(M);
  const double bracket = 1.0 + p_good * (spread + 3.0) * typical + p_fail * M * atypical;
  return bracket / (M * L);
}

inline double appc_rate_limit(double beta, double p0, double q0, double delta) {
  require(beta > 1.0, ErrorKind::BetaOutOfRange, "beta must exceed 1");
  return (q0 - p0 + 2.0 * delta) * (1.0 - 1.0 / beta);
}

}  // namespace dnawt
