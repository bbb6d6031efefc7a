#ifndef ATTRACTOR_BOREL_HPP
#define ATTRACTOR_BOREL_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "attractor/ce.hpp"
#include "attractor/error.hpp"
#include "attractor/quadrature.hpp"
#include "attractor/rational.hpp"
#include "attractor/series.hpp"

namespace attractor {

/// Borel transform with the fixed n! divisor. `coeffs[n]` is b_n; index 0 is
/// the transform of the constant term (0 for a CE series).
struct BorelSeries {
  std::vector<Rational> coeffs;

  std::size_t order() const noexcept { return coeffs.size() - 1; }
  const Rational& b(std::size_t n) const { return coeffs.at(n); }
};

/// b_n = c_n / n! for every retained coefficient of `s`.
inline BorelSeries borel_transform(const TruncatedSeries& s) {
  BorelSeries out;
  out.coeffs.reserve(s.order() + 1);
  for (std::size_t n = 0; n <= s.order(); ++n) out.coeffs.push_back(s[n] / Rational(factorial(n)));
  return out;
}

/// b_n = a_{2n} / n!, n = 1..N, with b_0 = 0.
inline BorelSeries borel_transform(const CECoefficients& c) {
  if (c.size() < 1) throw Error(ErrorCode::InsufficientData, "borel", "Borel transform needs at least one coefficient");
  BorelSeries out;
  out.coeffs.reserve(c.size() + 1);
  out.coeffs.emplace_back(0);
  for (std::size_t n = 1; n <= c.size(); ++n) out.coeffs.push_back(c.a(n) / Rational(factorial(n)));
  return out;
}

/// [L/M] rational approximant N(s)/D(s) with D(0) = 1.
struct PadeApproximant {
  std::size_t L = 0;
  std::size_t M = 0;
  std::vector<double> numerator;    ///< degree L, ascending powers
  std::vector<double> denominator;  ///< degree M, ascending powers, [0] = 1
  std::vector<std::complex<double>> poles;  ///< roots of D, finite ones only
  bool exact_solve = false;  ///< linear system was solved over the rationals

  template <typename T>
  T evaluate(T s) const {
    T num = 0, den = 0;
    for (std::size_t i = numerator.size(); i-- > 0;) num = num * s + numerator[i];
    for (std::size_t i = denominator.size(); i-- > 0;) den = den * s + denominator[i];
    return num / den;
  }
  double operator()(double s) const { return evaluate(s); }

  bool identically_zero() const {
    return std::all_of(numerator.begin(), numerator.end(), [](double v) { return v == 0.0; });
  }

  /// Taylor coefficients of N/D through `order`, by series division.
  std::vector<double> taylor(std::size_t order) const {
    std::vector<double> t(order + 1, 0.0);
    for (std::size_t i = 0; i <= order; ++i) {
      double v = i < numerator.size() ? numerator[i] : 0.0;
      for (std::size_t j = 1; j <= std::min(i, denominator.size() - 1); ++j) v -= denominator[j] * t[i - j];
      t[i] = v;
    }
    return t;
  }

  /// Closest pole to `target`, or +inf when there are none.
  double nearest_pole_distance(std::complex<double> target) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : poles) d = std::min(d, std::abs(p - target));
    return d;
  }
};

namespace detail {

/// Roots of an ascending-coefficient polynomial: companion-matrix eigenvalues
/// (Eigen), each polished by a few Newton steps in extended precision.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  const std::size_t degree = coeffs.size() - 1;
  std::vector<std::complex<double>> roots;
  if (degree == 0) return roots;
  if (degree == 1) {
    roots.emplace_back(-coeffs[0] / coeffs[1], 0.0);
    return roots;
  }
  Eigen::VectorXd poly(static_cast<Eigen::Index>(degree + 1));
  for (std::size_t i = 0; i <= degree; ++i) poly[static_cast<Eigen::Index>(i)] = coeffs[i];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(poly);
  for (const auto& r : solver.roots()) {
    std::complex<long double> z(r.real(), r.imag());
    for (int it = 0; it < 4; ++it) {
      std::complex<long double> p = 0, dp = 0;
      for (std::size_t i = degree + 1; i-- > 0;) {
        dp = dp * z + p;
        p = p * z + static_cast<long double>(coeffs[i]);
      }
      if (std::abs(dp) == 0.0L) break;
      const auto step = p / dp;
      // Guard against a polish step that jumps to a neighbouring root.
      if (std::abs(step) > 1e-3L * std::max(1.0L, std::abs(z))) break;
      z -= step;
    }
    auto root = std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    if (std::fabs(root.imag()) <= 1e-12 * std::max(1.0, std::abs(root))) root.imag(0.0);
    roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    const double da = std::abs(a), db = std::abs(b);
    if (da != db) return da < db;
    return a.imag() < b.imag();
  });
  return roots;
}

inline void check_pade_request(std::size_t length, std::size_t L, std::size_t M) {
  if (length < L + M + 1)
    throw Error(ErrorCode::InsufficientData, "borel",
                "[" + std::to_string(L) + "/" + std::to_string(M) + "] needs " + std::to_string(L + M + 1) +
                    " Taylor coefficients, got " + std::to_string(length));
}

/// Exact Gaussian elimination of A q = r; any nonzero pivot is admissible.
inline std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n)
      throw Error(ErrorCode::SingularPadeSystem, "borel", "Toeplitz system is singular (blocked Pade table entry)");
    std::swap(a[piv], a[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      if (a[row][col].is_zero()) continue;
      const Rational factor = a[row][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
      rhs[row] -= factor * rhs[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace detail

/// [L/M] Pade approximant of a floating-point Taylor series. The M x M
/// Toeplitz system for the denominator is solved by full-pivot LU; a rank
/// deficiency or a residual above 1e-8 (relative) is reported as
/// SingularPadeSystem.
inline PadeApproximant pade(std::span<const double> series, std::size_t L, std::size_t M) {
  detail::check_pade_request(series.size(), L, M);
  auto c = [&](std::ptrdiff_t i) { return i < 0 ? 0.0 : series[static_cast<std::size_t>(i)]; };
  const auto Ls = static_cast<std::ptrdiff_t>(L);
  PadeApproximant out;
  out.L = L;
  out.M = M;
  out.denominator.assign(M + 1, 0.0);
  out.denominator[0] = 1.0;
  if (M > 0) {
    const auto m = static_cast<Eigen::Index>(M);
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) a(i, j) = c(Ls + i - j);
      rhs(i) = -c(Ls + i + 1);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < m)
      throw Error(ErrorCode::SingularPadeSystem, "borel", "Toeplitz system has rank " + std::to_string(lu.rank()) + " < " + std::to_string(M));
    const Eigen::VectorXd q = lu.solve(rhs);
    const double scale = a.norm() * q.norm() + rhs.norm();
    if ((a * q - rhs).norm() > 1e-8 * std::max(scale, std::numeric_limits<double>::min()))
      throw Error(ErrorCode::SingularPadeSystem, "borel", "Toeplitz solve failed its residual check");
    for (std::size_t j = 0; j < M; ++j) out.denominator[j + 1] = q(static_cast<Eigen::Index>(j));
  }
  out.numerator.assign(L + 1, 0.0);
  for (std::size_t i = 0; i <= L; ++i)
    for (std::size_t j = 0; j <= std::min(i, M); ++j) out.numerator[i] += out.denominator[j] * series[i - j];
  out.poles = detail::polynomial_roots(out.denominator);
  return out;
}

/// [L/M] Pade approximant of an exact Taylor series. The linear algebra is
/// done over the rationals and the result rounded to double only at the end:
/// the Toeplitz matrices of factorially scaled series are far too
/// ill-conditioned for a floating-point solve (spurious poles appear).
inline PadeApproximant pade(std::span<const Rational> series, std::size_t L, std::size_t M) {
  detail::check_pade_request(series.size(), L, M);
  auto c = [&](std::ptrdiff_t i) { return i < 0 ? Rational(0) : series[static_cast<std::size_t>(i)]; };
  const auto Ls = static_cast<std::ptrdiff_t>(L);
  std::vector<Rational> q(M + 1);
  q[0] = Rational(1);
  if (M > 0) {
    std::vector<std::vector<Rational>> a(M, std::vector<Rational>(M));
    std::vector<Rational> rhs(M);
    for (std::size_t i = 0; i < M; ++i) {
      for (std::size_t j = 0; j < M; ++j) a[i][j] = c(Ls + static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j));
      rhs[i] = -c(Ls + static_cast<std::ptrdiff_t>(i) + 1);
    }
    const auto sol = detail::solve_exact(std::move(a), std::move(rhs));
    std::copy(sol.begin(), sol.end(), q.begin() + 1);
  }
  PadeApproximant out;
  out.L = L;
  out.M = M;
  out.exact_solve = true;
  out.denominator.reserve(M + 1);
  for (const auto& v : q) out.denominator.push_back(v.to_double());
  out.numerator.reserve(L + 1);
  for (std::size_t i = 0; i <= L; ++i) {
    Rational acc(0);
    for (std::size_t j = 0; j <= std::min(i, M); ++j) acc += q[j] * series[i - j];
    out.numerator.push_back(acc.to_double());
  }
  out.poles = detail::polynomial_roots(out.denominator);
  return out;
}

struct LaplaceOptions {
  std::size_t nodes = 80;              ///< Gauss-Laguerre nodes
  double pole_tolerance = 1e-8;        ///< t-space distance that counts as "on the contour"
  double fallback_distance = 0.25;     ///< closer poles switch to adaptive quadrature
  double adaptive_split = 40.0;        ///< adaptive panel [0, split], Laguerre tail beyond
};

/// Distance in t = sigma / x from the poles of `p` to the half-line [0, inf).
inline double contour_distance(const PadeApproximant& p, double x) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& pole : p.poles) {
    const std::complex<double> t = pole / x;
    d = std::min(d, t.real() >= 0.0 ? std::fabs(t.imag()) : std::abs(t));
  }
  return d;
}

namespace detail {
inline const GaussLaguerreRule& cached_laguerre(std::size_t nodes) {
  if (nodes == 80) {
    static const GaussLaguerreRule rule80 = gauss_laguerre(80);
    return rule80;
  }
  thread_local GaussLaguerreRule rule;
  if (rule.nodes.size() != nodes) rule = gauss_laguerre(nodes);
  return rule;
}
}  // namespace detail

/// int_0^inf e^-t P(x t) dt, the inverse of the n!-divisor Borel transform.
inline double laplace_resum(const PadeApproximant& p, double x, const LaplaceOptions& opt = {}) {
  if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "borel", "Laplace variable must be positive");
  if (p.identically_zero()) return 0.0;
  const double dist = contour_distance(p, x);
  if (dist < opt.pole_tolerance)
    throw Error(ErrorCode::PoleOnContour, "borel",
                "Pade pole within " + std::to_string(dist) + " of the positive axis in Laplace variable");
  const auto& rule = detail::cached_laguerre(opt.nodes);
  if (dist >= opt.fallback_distance) return rule.integrate([&](double t) { return p(x * t); });

  // Near-contour poles: adaptive panel on [0, split] plus the shifted tail
  //   int_split^inf e^-t P(xt) dt = e^-split int_0^inf e^-u P(x (u + split)) du.
  const double head = adaptive_gauss_kronrod([&](double t) { return std::exp(-t) * p(x * t); }, 0.0, opt.adaptive_split, 1e-14);
  const double tail = std::exp(-opt.adaptive_split) * rule.integrate([&](double u) { return p(x * (u + opt.adaptive_split)); });
  return head + tail;
}

/// omega(k) from Borel-Pade resummation: k -> laplace_resum(pade, k^2).
class ResummedDispersion {
 public:
  ResummedDispersion(PadeApproximant pade, LaplaceOptions options, double check_mismatch)
      : pade_(std::move(pade)), options_(options), check_mismatch_(check_mismatch) {}

  double operator()(double k) const {
    if (k == 0.0) return 0.0;
    return laplace_resum(pade_, k * k, options_);
  }

  const PadeApproximant& approximant() const noexcept { return pade_; }
  const LaplaceOptions& quadrature() const noexcept { return options_; }
  std::string scheme() const { return "gauss-laguerre-" + std::to_string(options_.nodes) + "+adaptive-gk15-fallback"; }

  /// Relative mismatch between the approximant's first unused Taylor
  /// coefficient and the true Borel coefficient (NaN when none was available).
  double check_mismatch() const noexcept { return check_mismatch_; }

 private:
  PadeApproximant pade_;
  LaplaceOptions options_;
  double check_mismatch_;
};

/// borel_transform -> exact [L/M] Pade -> Laplace integral.
inline ResummedDispersion resum_dispersion(const CECoefficients& c, std::size_t L, std::size_t M, const LaplaceOptions& opt = {}) {
  if (c.size() < L + M)
    throw Error(ErrorCode::InsufficientData, "borel",
                "[" + std::to_string(L) + "/" + std::to_string(M) + "] needs " + std::to_string(L + M) + " CE coefficients, got " +
                    std::to_string(c.size()));
  const auto borel = borel_transform(c);
  const std::span<const Rational> used(borel.coeffs.data(), L + M + 1);
  auto approx = pade(used, L, M);
  double mismatch = std::numeric_limits<double>::quiet_NaN();
  if (borel.coeffs.size() > L + M + 1) {
    const double predicted = approx.taylor(L + M + 1).back();
    const double actual = borel.coeffs[L + M + 1].to_double();
    mismatch = std::fabs(predicted - actual) / std::max(std::fabs(actual), std::numeric_limits<double>::min());
  }
  return ResummedDispersion(std::move(approx), opt, mismatch);
}

/// sum_{n <= order/2} a_{2n} k^{2n}.
inline double ce_truncation_eval(const CECoefficients& c, std::size_t order, double k) {
  if (order > 2 * c.size())
    throw Error(ErrorCode::OrderExceeded, "borel",
                "truncation order " + std::to_string(order) + " exceeds the " + std::to_string(c.size()) + " available coefficients");
  const double k2 = k * k;
  double sum = 0.0, power = 1.0;
  for (std::size_t n = 1; n <= order / 2; ++n) {
    power *= k2;
    sum += c.a(n).to_double() * power;
  }
  return sum;
}

}  // namespace attractor

#endif  // ATTRACTOR_BOREL_HPP
