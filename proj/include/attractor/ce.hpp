#ifndef ATTRACTOR_CE_HPP
#define ATTRACTOR_CE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "attractor/error.hpp"
#include "attractor/rational.hpp"
#include "attractor/series.hpp"
#include "attractor/weight.hpp"

namespace attractor {

/// Chapman-Enskog coefficients a_2, a_4, ..., a_{2N} of omega(k) = sum a_{2n} k^{2n}.
/// `values[n-1]` holds a_{2n}.
struct CECoefficients {
  std::vector<Rational> values;
  std::optional<WeightModel> weight;

  std::size_t size() const noexcept { return values.size(); }
  const Rational& a(std::size_t n) const { return values.at(n - 1); }
};

/// F(x) = sum_{m=1}^{order} (-1)^m mu_{2m} x^m.
inline TruncatedSeries build_source_series(const WeightModel& w, std::size_t order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "ce", "source series order must be at least 1");
  auto f = TruncatedSeries::zero(order);
  for (std::size_t m = 1; m <= order; ++m) {
    const auto mu = w.moment(m);
    f[m] = (m % 2 == 0) ? mu : -mu;
  }
  return f;
}

/// All a_{2n}, n = 1..n_max, from the Lagrange inversion formula.
///
/// Equivalent to calling lagrange_coefficient for each n, but shares one
/// reciprocal (1+F)^-1 and builds (1+F)^{-2n} incrementally.
inline CECoefficients ce_coefficients(const WeightModel& w, std::size_t n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "ce", "n_max must be at least 1");
  const auto f = build_source_series(w, n_max);
  const auto df = series_derivative(f);  // order n_max - 1
  auto one_plus_f = f.truncated(n_max - 1);
  one_plus_f[0] += Rational(1);
  const auto inv = series_reciprocal(one_plus_f);
  const auto inv_sq = inv * inv;

  CECoefficients out{{}, w};
  out.values.reserve(n_max);
  auto power = inv_sq;  // (1+F)^{-2n}
  for (std::size_t n = 1; n <= n_max; ++n) {
    mpq_class acc;
    for (std::size_t j = 0; j < n; ++j) acc += df[j].get() * power[n - 1 - j].get();
    out.values.push_back(Rational(std::move(acc)) / Rational(static_cast<std::int64_t>(n)));
    if (n < n_max) power = power * inv_sq;
  }
  return out;
}

/// r_n = |a_{2(n+1)} / a_{2n}|, n = 1..N-1, computed exactly and rounded last.
inline std::vector<double> ratio_sequence(const CECoefficients& c) {
  if (c.size() < 2) throw Error(ErrorCode::InsufficientData, "ce", "ratio sequence needs at least two coefficients");
  std::vector<double> r;
  r.reserve(c.size() - 1);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (c.values[i].is_zero())
      throw Error(ErrorCode::DivisionByZero, "ce", "a_" + std::to_string(2 * (i + 1)) + " vanishes; degenerate weight model");
    r.push_back(abs(c.values[i + 1] / c.values[i]).to_double());
  }
  return r;
}

enum class RadiusVerdict { ZeroConsistent, Finite };

struct RadiusEstimate {
  double radius = 0.0;  ///< extrapolated lim 1/r_n in the variable k^2, clamped at 0
  double intercept = 0.0;  ///< raw least-squares intercept of 1/r_n against 1/n
  double slope = 0.0;
  RadiusVerdict verdict = RadiusVerdict::ZeroConsistent;
  std::size_t points_used = 0;
};

/// Extrapolates 1/r_n linearly in 1/n to 1/n -> 0 over the last third of the
/// ratios. An intercept below a tenth of the smallest fitted 1/r_n is reported
/// as zero-consistent (divergent series); this is evidence, not proof.
inline RadiusEstimate radius_estimate(const CECoefficients& c) {
  if (c.size() < 8) throw Error(ErrorCode::InsufficientData, "ce", "radius estimate needs at least 8 coefficients");
  const auto r = ratio_sequence(c);
  const std::size_t count = std::max<std::size_t>(3, r.size() / 3);
  const std::size_t start = r.size() - count;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, ymin = HUGE_VAL;
  for (std::size_t i = start; i < r.size(); ++i) {
    const double x = 1.0 / static_cast<double>(i + 1);
    const double y = 1.0 / r[i];
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ymin = std::min(ymin, y);
  }
  const double n = static_cast<double>(count);
  const double denom = n * sxx - sx * sx;
  RadiusEstimate est;
  est.points_used = count;
  est.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  est.intercept = (sy - est.slope * sx) / n;
  est.radius = std::max(est.intercept, 0.0);
  est.verdict = est.intercept < 0.1 * ymin ? RadiusVerdict::ZeroConsistent : RadiusVerdict::Finite;
  return est;
}

}  // namespace attractor

#endif  // ATTRACTOR_CE_HPP
