#ifndef ATTRACTOR_SERIES_HPP
#define ATTRACTOR_SERIES_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "attractor/error.hpp"
#include "attractor/rational.hpp"

namespace attractor {

/// Formal power series c_0 + c_1 x + ... + c_N x^N over exact rationals.
///
/// The retained order N is part of the value: binary operations return a
/// series truncated to the smaller operand order. Nothing is ever padded with
/// zeros behind the caller's back, so a coefficient beyond the order is an
/// error rather than a silent 0.
class TruncatedSeries {
 public:
  TruncatedSeries() : coeffs_(1) {}
  explicit TruncatedSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "exactseries", "a series needs at least one coefficient");
  }
  TruncatedSeries(std::initializer_list<Rational> coeffs) : TruncatedSeries(std::vector<Rational>(coeffs)) {}

  static TruncatedSeries zero(std::size_t order) { return TruncatedSeries(std::vector<Rational>(order + 1)); }
  static TruncatedSeries constant(const Rational& c, std::size_t order) {
    auto s = zero(order);
    s.coeffs_[0] = c;
    return s;
  }
  static TruncatedSeries one(std::size_t order) { return constant(Rational(1), order); }

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  const Rational& operator[](std::size_t i) const { return coeffs_[i]; }
  Rational& operator[](std::size_t i) { return coeffs_[i]; }

  /// Drops terms above `order`; asking for a longer series is an error.
  TruncatedSeries truncated(std::size_t order) const {
    if (order > this->order())
      throw Error(ErrorCode::OrderExceeded, "exactseries",
                  "cannot extend a series of order " + std::to_string(this->order()) + " to " + std::to_string(order));
    return TruncatedSeries(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order) + 1));
  }

  TruncatedSeries operator-() const {
    auto out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
  }

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

  friend std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s) {
    os << '[';
    for (std::size_t i = 0; i < s.coeffs_.size(); ++i) os << (i ? ", " : "") << s.coeffs_[i];
    return os << "] + O(x^" << s.order() + 1 << ')';
  }

 private:
  std::vector<Rational> coeffs_;
};

inline TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t n = std::min(a.order(), b.order());
  auto out = TruncatedSeries::zero(n);
  for (std::size_t i = 0; i <= n; ++i) out[i] = a[i] + b[i];
  return out;
}

inline TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t n = std::min(a.order(), b.order());
  auto out = TruncatedSeries::zero(n);
  for (std::size_t i = 0; i <= n; ++i) out[i] = a[i] - b[i];
  return out;
}

inline TruncatedSeries series_scale(const TruncatedSeries& a, const Rational& c) {
  auto out = a;
  for (std::size_t i = 0; i <= out.order(); ++i) out[i] *= c;
  return out;
}

/// Cauchy product truncated at min(order(a), order(b)).
inline TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t n = std::min(a.order(), b.order());
  std::vector<mpq_class> acc(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (a[i].is_zero()) continue;
    const mpq_class& ai = a[i].get();
    for (std::size_t j = 0; i + j <= n; ++j) {
      if (b[j].is_zero()) continue;
      acc[i + j] += ai * b[j].get();
    }
  }
  std::vector<Rational> out;
  out.reserve(n + 1);
  for (auto& q : acc) out.emplace_back(std::move(q));
  return TruncatedSeries(std::move(out));
}

inline TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) { return series_add(a, b); }
inline TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return series_sub(a, b); }
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return series_mul(a, b); }

/// 1/a to the order of a, by Newton iteration g <- g (2 - a g), doubling the
/// number of correct terms per pass.
inline TruncatedSeries series_reciprocal(const TruncatedSeries& a) {
  if (a[0].is_zero()) throw Error(ErrorCode::ZeroConstantTerm, "exactseries", "reciprocal of a series with zero constant term");
  const std::size_t target = a.order() + 1;
  TruncatedSeries g = TruncatedSeries::constant(Rational(1) / a[0], 0);
  std::size_t have = 1;
  while (have < target) {
    have = std::min(2 * have, target);
    const std::size_t ord = have - 1;
    TruncatedSeries g_ext = TruncatedSeries::zero(ord);
    for (std::size_t i = 0; i <= g.order(); ++i) g_ext[i] = g[i];
    auto two_minus_ag = -(a.truncated(ord) * g_ext);
    two_minus_ag[0] += Rational(2);
    g = g_ext * two_minus_ag;
  }
  return g;
}

/// a^p. Non-negative powers by binary exponentiation; negative powers as the
/// power of the reciprocal.
inline TruncatedSeries series_int_pow(const TruncatedSeries& a, long p) {
  if (p < 0) {
    if (a[0].is_zero()) throw Error(ErrorCode::ZeroConstantTerm, "exactseries", "negative power of a series with zero constant term");
    return series_int_pow(series_reciprocal(a), -p);
  }
  auto result = TruncatedSeries::one(a.order());
  auto base = a;
  auto e = static_cast<unsigned long>(p);
  while (e) {
    if (e & 1UL) result = result * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

/// Termwise derivative; the result has order(a) - 1 (a constant maps to the
/// order-0 zero series).
inline TruncatedSeries series_derivative(const TruncatedSeries& a) {
  if (a.order() == 0) return TruncatedSeries::zero(0);
  auto out = TruncatedSeries::zero(a.order() - 1);
  for (std::size_t i = 1; i <= a.order(); ++i) out[i - 1] = a[i] * Rational(static_cast<std::int64_t>(i));
  return out;
}

/// a(b(x)) for b with zero constant term, by Horner's scheme.
inline TruncatedSeries series_compose(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (!b[0].is_zero()) throw Error(ErrorCode::NonzeroConstant, "exactseries", "inner series of a composition must vanish at 0");
  const std::size_t n = std::min(a.order(), b.order());
  auto inner = b.truncated(n);
  auto out = TruncatedSeries::constant(a[a.order()], n);
  for (std::size_t i = a.order(); i-- > 0;) {
    out = out * inner;
    out[0] += a[i];
  }
  return out;
}

/// [x^m] a.
inline const Rational& coefficient_of(const TruncatedSeries& a, std::size_t m) {
  if (m > a.order())
    throw Error(ErrorCode::OrderExceeded, "exactseries",
                "coefficient x^" + std::to_string(m) + " requested from a series of order " + std::to_string(a.order()));
  return a[m];
}

/// Coefficient of y^n in the solution w(y) of w = F(y (1 + w)^-2):
///   (1/n) [x^(n-1)] F'(x) (1 + F(x))^(-2n).
inline Rational lagrange_coefficient(const TruncatedSeries& source, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "exactseries", "Lagrange coefficient index must be positive");
  if (!source[0].is_zero()) throw Error(ErrorCode::NonzeroConstant, "exactseries", "source series must vanish at 0");
  if (source.order() < n)
    throw Error(ErrorCode::OrderExceeded, "exactseries",
                "source of order " + std::to_string(source.order()) + " is too short for coefficient " + std::to_string(n));
  const auto f = source.truncated(n);
  auto one_plus_f = f;
  one_plus_f[0] += Rational(1);
  const auto integrand = series_derivative(f) * series_int_pow(one_plus_f.truncated(n - 1), -2 * static_cast<long>(n));
  return coefficient_of(integrand, n - 1) / Rational(static_cast<std::int64_t>(n));
}

}  // namespace attractor

#endif  // ATTRACTOR_SERIES_HPP
