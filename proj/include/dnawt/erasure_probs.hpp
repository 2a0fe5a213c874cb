#pragma once

// Probability that a sequencing run misses a set of informative oligos in a
// sample diluted with background DNA, exactly and in the two asymptotic
// regimes (heavily diluted Eve, amplified Bob).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "dnawt/errors.hpp"

namespace dnawt {

struct MixModel {
  double M;           // informative oligo count
  double kappa_bar;   // mean copies per informative oligo
  double N_B;         // background fragments
  double N_r;         // reads

  static MixModel from_background(double M, double kappa_bar, double N_B, double N_r) {
    MixModel m{M, kappa_bar, N_B, N_r};
    m.validate();
    return m;
  }

  // Background chosen so that the informative proportion equals rho.
  static MixModel from_rho(double M, double kappa_bar, double rho, double N_r) {
    require(rho > 0.0 && rho <= 1.0, ErrorKind::DomainError, "rho must lie in (0,1]");
    return from_background(M, kappa_bar, kappa_bar * M * (1.0 - rho) / rho, N_r);
  }

  double N_tot() const noexcept { return kappa_bar * M + N_B; }
  double rho() const noexcept { return kappa_bar * M / N_tot(); }

  // The closed-form approximations assume N_r << N_tot.
  bool reads_negligible() const noexcept { return N_r <= 0.1 * N_tot(); }

  void validate() const {
    require(M >= 1.0, ErrorKind::DomainError, "M must be at least 1");
    require(kappa_bar > 0.0, ErrorKind::DomainError, "kappa_bar must be positive");
    require(N_B >= 0.0, ErrorKind::DomainError, "N_B must be non-negative");
    require(N_r >= 0.0 && N_r == std::floor(N_r), ErrorKind::DomainError, "N_r must be a non-negative integer");
    require(N_r <= N_tot(), ErrorKind::DomainError, "cannot read more fragments than the sample holds");
  }
};

namespace detail {

// (u - c) ln(u - c) - u ln u, without cancelling two huge terms.
inline double theta_antiderivative(double u, double c) { return u * std::log1p(-c / u) - c * std::log(u - c); }

}  // namespace detail

/// Probability that N_r draws without replacement from N_tot fragments miss
/// all kappa_bar * s copies of s given oligos:
///   prod_{j=0}^{N_r-1} (1 - kappa_bar s / (N_tot - j)),
/// summed in log space. Large read counts use Euler-Maclaurin on all but the
/// last few factors, which are multiplied exactly.
inline double theta_exact(const MixModel& model, double s) {
  model.validate();
  require(s >= 0.0, ErrorKind::DomainError, "subset size must be non-negative");
  const double c = model.kappa_bar * s;
  const double T = model.N_tot();
  const auto n = static_cast<std::uint64_t>(model.N_r);
  if (c == 0.0 || n == 0) return 1.0;
  // The smallest factor is the last one; non-positive means certain detection.
  if (1.0 - c / (T - static_cast<double>(n - 1)) <= 0.0) return 0.0;

  constexpr std::uint64_t kExactTerms = 1'000'000;
  constexpr std::uint64_t kTailTerms = 1'000;
  double log_theta = 0.0;
  std::uint64_t start = 0;
  if (n > kExactTerms) {
    // Sum f(j) = ln(1 - c/(T - j)) for j = 0..b with b = n - kTailTerms - 1.
    const double b = static_cast<double>(n - kTailTerms - 1);
    const auto f = [&](double x) { return std::log1p(-c / (T - x)); };
    const auto fp = [&](double x) { return 1.0 / (T - x) - 1.0 / (T - x - c); };
    const double integral = detail::theta_antiderivative(T, c) - detail::theta_antiderivative(T - b, c);
    log_theta = integral + 0.5 * (f(0.0) + f(b)) + (fp(b) - fp(0.0)) / 12.0;
    start = n - kTailTerms;
  }
  for (std::uint64_t j = start; j < n; ++j) log_theta += std::log1p(-c / (T - static_cast<double>(j)));
  return std::clamp(std::exp(log_theta), 0.0, 1.0);
}

/// Heavily diluted sample: q0 = exp(-rho N_r / M).
inline double eve_erasure_prob(double rho, double n_r, double m) {
  require(rho >= 0.0 && rho <= 1.0, ErrorKind::DomainError, "rho must lie in [0,1]");
  require(n_r >= 0.0 && m >= 1.0, ErrorKind::DomainError, "need N_r >= 0 and M >= 1");
  return std::exp(-rho * n_r / m);
}

/// Amplified sample: p0 = (1 - rho/M)^N_r.
inline double bob_erasure_prob(double rho, double n_r, double m) {
  require(rho >= 0.0 && rho <= 1.0, ErrorKind::DomainError, "rho must lie in [0,1]");
  require(n_r >= 0.0 && m >= 1.0, ErrorKind::DomainError, "need N_r >= 0 and M >= 1");
  if (n_r == 0.0) return 1.0;
  const double x = rho / m;
  if (x >= 1.0) return 0.0;
  return std::exp(n_r * std::log1p(-x));
}

inline bool eve_regime(double rho) noexcept { return rho <= 1e-2; }
inline bool bob_regime(double rho) noexcept { return rho >= 0.05; }

}  // namespace dnawt
