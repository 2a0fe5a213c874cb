#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include "dnawt/errors.hpp"

namespace dnawt {

inline constexpr double kLog2E = std::numbers::log2e;

// -p log2 p with the 0 log 0 = 0 convention.
inline double neg_plog2p(double p) noexcept { return p > 0.0 ? -p * std::log2(p) : 0.0; }

inline double entropy_bits(std::span<const double> p) noexcept {
  double h = 0.0;
  for (double x : p) h += neg_plog2p(x);
  return h;
}

inline double binary_entropy(double x) {
  require_probability(x, "x");
  if (x == 0.0 || x == 1.0) return 0.0;
  return neg_plog2p(x) - (1.0 - x) * std::log1p(-x) * kLog2E;
}

// h'(x) = log2((1-x)/x) on the open interval.
inline double binary_entropy_derivative(double x) {
  require(x > 0.0 && x < 1.0, ErrorKind::DomainError, "h'(x) needs x in (0,1)");
  return std::log2((1.0 - x) / x);
}

}  // namespace dnawt
