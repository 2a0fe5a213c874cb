#pragma once

// Per-symbol component channels f_X(a) -> f_Y(a), f_Z(a) of the frequency
// vector channel and the degrading channels that turn Bob's component into
// Eve's. Templated on the scalar so identities can be checked exactly with
// boost::multiprecision::cpp_rational.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dnawt/errors.hpp"

namespace dnawt {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
class ChannelMatrix {
 public:
  ChannelMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  T row_sum(std::size_t r) const {
    T s(0);
    for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c);
    return s;
  }

  bool is_stochastic() const {
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        if ((*this)(r, c) < T(0)) return false;
      }
      if (row_sum(r) != T(1)) return false;
    }
    return true;
  }

  friend bool operator==(const ChannelMatrix&, const ChannelMatrix&) = default;

 private:
  std::size_t rows_, cols_;
  std::vector<T> data_;
};

/// Channel `first` followed by channel `second`: (first * second)(i, j).
template <class T>
ChannelMatrix<T> compose(const ChannelMatrix<T>& first, const ChannelMatrix<T>& second) {
  require(first.cols() == second.rows(), ErrorKind::LengthMismatch, "channel alphabets do not chain");
  ChannelMatrix<T> out(first.rows(), second.cols());
  for (std::size_t i = 0; i < first.rows(); ++i)
    for (std::size_t k = 0; k < first.cols(); ++k) {
      if (first(i, k) == T(0)) continue;
      for (std::size_t j = 0; j < second.cols(); ++j) out(i, j) += first(i, k) * second(k, j);
    }
  return out;
}

template <class T>
T power(const T& base, std::size_t e) {
  T out(1);
  for (std::size_t i = 0; i < e; ++i) out *= base;
  return out;
}

/// Pascal's triangle up to row n, in the scalar type.
template <class T>
std::vector<std::vector<T>> binomial_table(std::size_t n) {
  std::vector<std::vector<T>> c(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    c[i].assign(i + 1, T(1));
    for (std::size_t j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

/// Binomial thinning: each of i inputs survives independently with probability `keep`.
template <class T>
ChannelMatrix<T> thinning_matrix(std::size_t M, const T& keep) {
  const auto C = binomial_table<T>(M);
  const T drop = T(1) - keep;
  ChannelMatrix<T> out(M + 1, M + 1);
  for (std::size_t i = 0; i <= M; ++i)
    for (std::size_t j = 0; j <= i; ++j) out(i, j) = C[i][j] * power(drop, i - j) * power(keep, j);
  return out;
}

template <class T>
void check_probability(const T& p, const char* name) {
  require(p >= T(0) && p <= T(1), ErrorKind::DomainError, std::string(name) + " must lie in [0,1]");
}

template <class T>
void check_order(const T& p0, const T& q0) {
  check_probability(p0, "p0");
  check_probability(q0, "q0");
  require(q0 >= p0, ErrorKind::OrderViolation, "degradation needs q0 >= p0");
  require(p0 < T(1), ErrorKind::OrderViolation, "degradation needs p0 < 1");
}

/// Bob: P(j | i) = C(i,j) p0^{i-j} (1-p0)^j.
template <class T>
ChannelMatrix<T> bob_component_matrix(std::size_t M, const T& p0) {
  require(M >= 1, ErrorKind::DomainError, "M must be at least 1");
  check_probability(p0, "p0");
  return thinning_matrix<T>(M, T(1) - p0);
}

/// Eve's presence indicator: column 0 = absent with probability q0^i.
template <class T>
ChannelMatrix<T> eve_component_matrix(std::size_t M, const T& q0) {
  require(M >= 1, ErrorKind::DomainError, "M must be at least 1");
  check_probability(q0, "q0");
  ChannelMatrix<T> out(M + 1, 2);
  for (std::size_t i = 0; i <= M; ++i) {
    out(i, 0) = power(q0, i);
    out(i, 1) = T(1) - out(i, 0);
  }
  return out;
}

/// Q(0 | k) = ((q0 - p0) / (1 - p0))^k maps Bob's count to Eve's presence bit.
template <class T>
ChannelMatrix<T> degrading_matrix(std::size_t M, const T& p0, const T& q0) {
  check_order(p0, q0);
  const T a = (q0 - p0) / (T(1) - p0);
  ChannelMatrix<T> out(M + 1, 2);
  for (std::size_t k = 0; k <= M; ++k) {
    out(k, 0) = power(a, k);
    out(k, 1) = T(1) - out(k, 0);
  }
  return out;
}

/// Eve with at most one copy per molecule: binomial thinning with retention 1 - q0.
template <class T>
ChannelMatrix<T> eve_component_matrix_bernoulli(std::size_t M, const T& q0) {
  require(M >= 1, ErrorKind::DomainError, "M must be at least 1");
  check_probability(q0, "q0");
  return thinning_matrix<T>(M, T(1) - q0);
}

template <class T>
ChannelMatrix<T> degrading_matrix_bernoulli(std::size_t M, const T& p0, const T& q0) {
  check_order(p0, q0);
  return thinning_matrix<T>(M, (T(1) - q0) / (T(1) - p0));
}

/// Parses "a/b", an integer, or a finite decimal such as "0.125" or "1e-3"
/// into an exact rational. Anything else is not accepted as exact.
inline Rational exact_probability(std::string_view text) {
  const auto fail = [&]() -> Rational {
    throw Error(ErrorKind::IrrationalInput, "'" + std::string(text) + "' is not an exact rational literal");
  };
  const auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    }
    return true;
  };
  const auto parse_decimal = [&](std::string_view s) -> Rational {
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
      negative = s[0] == '-';
      s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view es = s.substr(e + 1);
      bool eneg = false;
      if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
        eneg = es[0] == '-';
        es.remove_prefix(1);
      }
      if (!all_digits(es) || es.size() > 6) return fail();
      exponent = std::stol(std::string(es)) * (eneg ? -1 : 1);
      s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view ip = s.substr(0, dot);
      std::string_view fp = s.substr(dot + 1);
      if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
        return fail();
      digits = std::string(ip) + std::string(fp);
      exponent -= static_cast<long>(fp.size());
    } else {
      if (!all_digits(s)) return fail();
      digits = std::string(s);
    }
    if (digits.empty()) return fail();
    // BigInt reads a leading 0 as octal.
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    Rational value{BigInt(digits)};
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
    value = exponent < 0 ? value / Rational(scale) : value * Rational(scale);
    return negative ? Rational(-value) : value;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num[0] == '+' || num[0] == '-')) {
      negative = num[0] == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) return fail();
    const auto strip = [](std::string_view v) { return std::string(v.substr(std::min(v.find_first_not_of('0'), v.size() - 1))); };
    const BigInt d(strip(den));
    if (d == 0) return fail();
    Rational r(BigInt(strip(num)), d);
    return negative ? Rational(-r) : r;
  }
  return parse_decimal(text);
}

/// Converts an exact rational matrix to binary64 for display or tolerance checks.
inline ChannelMatrix<double> to_double(const ChannelMatrix<Rational>& m) {
  ChannelMatrix<double> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = static_cast<double>(m(r, c));
  return out;
}

}  // namespace dnawt
