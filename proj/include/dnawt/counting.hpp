#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

#include "dnawt/errors.hpp"

namespace dnawt {

/// Exact binomial coefficient C(n, k); 0 when k > n.
inline boost::multiprecision::cpp_int binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  boost::multiprecision::cpp_int out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

/// Number of integer vectors s with s_i >= b_i and sum s_i = n:
/// C(n - sum b + l - 1, l - 1), or 0 when sum b > n.
inline boost::multiprecision::cpp_int count_supervectors(std::span<const std::int64_t> b, std::int64_t n) {
  require(!b.empty(), ErrorKind::DomainError, "need at least one component");
  boost::multiprecision::cpp_int slack = n;
  for (auto x : b) slack -= x;
  if (slack < 0) return 0;
  const auto ell = static_cast<std::uint64_t>(b.size());
  return binomial(slack.convert_to<std::uint64_t>() + ell - 1, ell - 1);
}

}  // namespace dnawt
