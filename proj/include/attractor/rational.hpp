#ifndef ATTRACTOR_RATIONAL_HPP
#define ATTRACTOR_RATIONAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "attractor/error.hpp"

namespace attractor {

/// Exact arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : value_(static_cast<long>(n)) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) : Rational(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))) {}
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "exactseries", "zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  explicit Rational(const mpz_class& n) : value_(n) {}
  explicit Rational(mpq_class q) : value_(std::move(q)) { value_.canonicalize(); }

  /// Parses "p", "p/q" or "-p/q" (surrounding whitespace ignored).
  static Rational parse(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    auto last = text.find_last_not_of(" \t\r\n");
    if (first == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "exactseries", "empty rational literal");
    std::string s(text.substr(first, last - first + 1));
    if (s.front() == '+') s.erase(0, 1);
    const auto slash = s.find('/');
    mpz_class num, den(1);
    auto valid = [](const std::string& digits) {
      if (digits.empty()) return false;
      std::size_t i = digits[0] == '-' ? 1 : 0;
      if (i == digits.size()) return false;
      for (; i < digits.size(); ++i)
        if (digits[i] < '0' || digits[i] > '9') return false;
      return true;
    };
    const std::string ns = s.substr(0, slash);
    const std::string ds = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid(ns) || !valid(ds) || ds[0] == '-')
      throw Error(ErrorCode::InvalidArgument, "exactseries", "malformed rational literal '" + s + "'");
    num.set_str(ns, 10);
    den.set_str(ds, 10);
    return Rational(num, den);
  }

  const mpq_class& get() const noexcept { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  bool is_zero() const noexcept { return sgn(value_) == 0; }
  int sign() const noexcept { return sgn(value_); }
  bool is_integer() const noexcept { return value_.get_den() == 1; }

  double to_double() const { return value_.get_d(); }

  /// log10|x| without overflowing a double, valid for numbers of any size.
  double log10_abs() const {
    if (is_zero()) return -HUGE_VAL;
    auto log10_mpz = [](const mpz_class& z) {
      long exp2 = 0;
      const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
      return std::log10(std::fabs(mant)) + static_cast<double>(exp2) * std::log10(2.0);
    };
    return log10_mpz(value_.get_num()) - log10_mpz(value_.get_den());
  }

  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const { return value_.get_str(10); }

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "exactseries", "division by zero rational");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  mpq_class value_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline mpz_class factorial(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

/// (2m-1)!! as a direct product of odd integers; (-1)!! = 1.
inline mpz_class double_factorial_odd(unsigned long m) {
  mpz_class out(1);
  for (unsigned long j = 1; j < 2 * m; j += 2) out *= j;
  return out;
}

}  // namespace attractor

#endif  // ATTRACTOR_RATIONAL_HPP
