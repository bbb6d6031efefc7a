#ifndef ATTRACTOR_DISPERSION_HPP
#define ATTRACTOR_DISPERSION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attractor/borel.hpp"
#include "attractor/ce.hpp"
#include "attractor/error.hpp"
#include "attractor/special.hpp"
#include "attractor/spectral.hpp"
#include "attractor/weight.hpp"

namespace attractor {

enum class DispersionMethod { ExactGaussian, ExactBounded, Resummed, Branch, CETruncation };

constexpr std::string_view to_string(DispersionMethod m) noexcept {
  switch (m) {
    case DispersionMethod::ExactGaussian: return "exact-gaussian";
    case DispersionMethod::ExactBounded: return "exact-bounded";
    case DispersionMethod::Resummed: return "resummed";
    case DispersionMethod::Branch: return "branch";
    case DispersionMethod::CETruncation: return "ce-truncation";
  }
  return "unknown";
}

struct DispersionSample {
  double k = 0.0;
  double omega = 0.0;
  double residual = 0.0;
  DispersionMethod method = DispersionMethod::ExactGaussian;
};

/// I(A) = int A/(A + v^2) e^{-v^2/2}/sqrt(2 pi) dv = sqrt(pi A / 2) erfcx(sqrt(A / 2)).
inline double gaussian_resolvent(double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "dispersion", "resolvent argument must be positive");
  const double z = std::sqrt(0.5 * a);
  return std::sqrt(std::numbers::pi) * z * erfcx(z);
}

namespace detail {

/// Safeguarded Newton for g(y) = 0 on (lo, hi], g(lo) < 0 < g(hi) required.
/// `g` returns {value, derivative}. Newton steps leaving the bracket fall
/// back to bisection; the bracket is tightened every iteration.
template <typename G>
double safeguarded_newton(G&& g, double lo, double hi, double start, double tol, std::string_view what) {
  double glo = g(lo).first, ghi = g(hi).first;
  if (ghi == 0.0) return hi;
  if (!(glo < 0.0 && ghi > 0.0))
    throw Error(ErrorCode::NoRootInInterval, "dispersion", std::string(what) + ": no sign change on the physical interval");
  double y = std::clamp(start, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const auto [val, der] = g(y);
    if (val == 0.0) return y;
    if (val < 0.0) lo = y; else hi = y;
    double next = (der != 0.0 && std::isfinite(der)) ? y - val / der : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - y);
    y = next;
    if (step <= tol * std::max(1.0, std::fabs(y)) || hi - lo <= tol) break;
  }
  return y;
}

}  // namespace detail

/// Root of (omega + 1) - I((1 + omega)^2 / k^2) on omega in (-1, 0].
inline DispersionSample solve_exact_gaussian(double k, double tol = 1e-15) {
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "dispersion", "k must be positive");
  if (!(tol >= 1e-16)) throw Error(ErrorCode::InvalidArgument, "dispersion", "tolerance below 1e-16 is not attainable");
  const double k2 = k * k;
  // y = 1 + omega; dI/dA via d/dz [sqrt(pi) z erfcx(z)] with z = sqrt(A/2).
  auto g = [k2](double y) {
    const double a = y * y / k2;
    const double z = std::sqrt(0.5 * a);
    const double ex = erfcx(z);
    const double resolvent = std::sqrt(std::numbers::pi) * z * ex;
    const double dI_dz = std::sqrt(std::numbers::pi) * (ex * (1.0 + 2.0 * z * z)) - 2.0 * z;
    const double dz_dy = z / y;
    return std::pair{y - resolvent, 1.0 - dI_dz * dz_dy};
  };
  const double start = k <= 0.5 ? 1.0 - k2 + k2 * k2 : 0.8;
  const double y = detail::safeguarded_newton(g, 1e-9, 1.0, start, tol, "Gaussian self-consistency");
  return {k, y - 1.0, std::fabs(g(y).first), DispersionMethod::ExactGaussian};
}

/// Bounded-support self-consistency 1 = int_{-1}^{1} W(v) / (1 + omega + i k v) dv.
///
/// BoundedUniform reduces to arctan(k / y) / k = 1 with y = 1 + omega.
/// BoundedCustom sums F(x) = sum (-1)^m mu_{2m} x^m over the supplied moments
/// and solves omega = F(k^2 / (1 + omega)^2); x must stay below the radius
/// implied by the last two moments.
inline DispersionSample solve_exact_bounded(double k, const WeightModel& w, double tol = 1e-15) {
  if (!w.bounded()) throw Error(ErrorCode::InvalidArgument, "dispersion", "solve_exact_bounded needs a bounded-support weight");
  if (k == 0.0) return {0.0, 0.0, 0.0, DispersionMethod::ExactBounded};
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "dispersion", "k must be non-negative");
  if (w.kind() == WeightKind::BoundedUniform) {
    auto g = [k](double y) {
      const double q = k / y;
      return std::pair{1.0 - std::atan(q) / k, (1.0 / (1.0 + q * q)) * q / (k * y)};
    };
    const double start = 1.0 - k * k / 3.0;
    const double y = detail::safeguarded_newton(g, 1e-12, 1.0, start, tol, "bounded-uniform self-consistency");
    return {k, y - 1.0, std::fabs(g(y).first), DispersionMethod::ExactBounded};
  }

  const auto& mu = w.custom_moments();
  const double radius = mu.size() >= 2 ? (mu[mu.size() - 2] / mu.back()).to_double() : 1.0;
  std::vector<double> coeff(mu.size());
  for (std::size_t m = 0; m < mu.size(); ++m) coeff[m] = ((m % 2 == 0) ? -1.0 : 1.0) * mu[m].to_double();
  const double k2 = k * k;
  double last_term = 0.0;
  auto g = [&](double y) {
    const double x = k2 / (y * y);
    if (x >= radius)
      throw Error(ErrorCode::SeriesDivergent, "dispersion",
                  "x = " + std::to_string(x) + " reaches the moment series radius " + std::to_string(radius));
    double f = 0.0, df = 0.0, p = 1.0;
    for (std::size_t m = 0; m < coeff.size(); ++m) {
      df += static_cast<double>(m + 1) * coeff[m] * p;
      p *= x;
      f += coeff[m] * p;
    }
    last_term = std::fabs(coeff.back() * p);
    // h(y) = (y - 1) - F(x(y)), dx/dy = -2x/y
    return std::pair{(y - 1.0) - f, 1.0 + df * 2.0 * x / y};
  };
  // Smallest admissible y keeps x below the radius.
  const double y_min = std::max(std::sqrt(k2 / radius) * (1.0 + 1e-12), 1e-12);
  if (y_min >= 1.0)
    throw Error(ErrorCode::SeriesDivergent, "dispersion", "k exceeds the convergence range of the supplied moments");
  const double y = detail::safeguarded_newton(g, y_min, 1.0, 1.0 - k2 * mu[0].to_double(), tol, "bounded-custom self-consistency");
  const double res = std::fabs(g(y).first);
  return {k, y - 1.0, std::max(res, last_term), DispersionMethod::ExactBounded};
}

struct CompareOptions {
  WeightModel weight = WeightModel::gaussian();
  std::size_t n_max = 30;
  std::size_t pade_L = 14;
  std::size_t pade_M = 14;
  std::vector<int> branch_orders{1, 2, 20, 50};
  double branch_step = 0.01;
  double branch_arclength = 5.0;
};

/// One column of the comparison table; missing cells are nullopt.
struct MethodColumn {
  std::string name;
  DispersionMethod method;
  std::vector<std::optional<double>> omega;
  std::vector<std::optional<double>> deviation;  ///< omega - omega_exact
  std::vector<std::string> errors;               ///< first error message per failed cell, "" otherwise
};

struct DispersionTable {
  std::vector<double> k;
  std::vector<MethodColumn> columns;  ///< [0] is the exact reference
  std::vector<BranchCurve> branches;  ///< traced curves behind the branch columns
  std::optional<ResummedDispersion> resummed;

  const MethodColumn& column(std::string_view name) const {
    for (const auto& c : columns)
      if (c.name == name) return c;
    throw Error(ErrorCode::InvalidArgument, "dispersion", "no column named " + std::string(name));
  }
};

/// Exact reference, Borel-Pade [L/M], spectral branches and CE^2 / CE^4 on a
/// common k grid. A failing cell is recorded as missing, never fatal.
/// Spectral branches belong to the Gaussian hierarchy and are only produced
/// for the Gaussian weight.
inline DispersionTable compare_methods(const std::vector<double>& k_grid, const CompareOptions& opt = {}) {
  for (double k : k_grid)
    if (!(k >= 0.0 && k <= 1.2 + 1e-12))
      throw Error(ErrorCode::InvalidArgument, "dispersion", "k grid must lie within [0, 1.2]");
  DispersionTable table;
  table.k = k_grid;
  const std::size_t rows = k_grid.size();
  const bool gaussian = opt.weight.kind() == WeightKind::Gaussian;

  auto fill = [&](std::string name, DispersionMethod method, const std::function<std::optional<double>(double)>& eval) {
    MethodColumn col{std::move(name), method, std::vector<std::optional<double>>(rows), std::vector<std::optional<double>>(rows),
                     std::vector<std::string>(rows)};
    for (std::size_t i = 0; i < rows; ++i) {
      try {
        col.omega[i] = eval(k_grid[i]);
      } catch (const Error& e) {
        col.errors[i] = e.what();
      }
    }
    table.columns.push_back(std::move(col));
  };

  fill("exact", gaussian ? DispersionMethod::ExactGaussian : DispersionMethod::ExactBounded, [&](double k) -> std::optional<double> {
    if (k == 0.0) return 0.0;
    return gaussian ? solve_exact_gaussian(k).omega : solve_exact_bounded(k, opt.weight).omega;
  });

  const auto coeffs = ce_coefficients(opt.weight, std::max<std::size_t>({opt.n_max, opt.pade_L + opt.pade_M, 2}));
  try {
    table.resummed.emplace(resum_dispersion(coeffs, opt.pade_L, opt.pade_M));
  } catch (const Error& e) {
    MethodColumn col{"resummed", DispersionMethod::Resummed, std::vector<std::optional<double>>(rows),
                     std::vector<std::optional<double>>(rows), std::vector<std::string>(rows, e.what())};
    table.columns.push_back(std::move(col));
  }
  if (table.resummed) fill("resummed", DispersionMethod::Resummed, [&](double k) -> std::optional<double> { return (*table.resummed)(k); });

  if (gaussian) {
    for (int n : opt.branch_orders) {
      std::optional<BranchCurve> curve;
      std::string failure;
      try {
        curve = trace_branch(n, opt.branch_step, opt.branch_arclength);
      } catch (const Error& e) {
        failure = e.what();
      }
      fill("branch_n" + std::to_string(n), DispersionMethod::Branch, [&](double k) -> std::optional<double> {
        if (!curve) throw Error(ErrorCode::CorrectorDiverged, "spectral", failure);
        return branch_value(*curve, k);
      });
      if (curve) table.branches.push_back(std::move(*curve));
    }
  }

  fill("ce2", DispersionMethod::CETruncation, [&](double k) -> std::optional<double> { return ce_truncation_eval(coeffs, 2, k); });
  fill("ce4", DispersionMethod::CETruncation, [&](double k) -> std::optional<double> { return ce_truncation_eval(coeffs, 4, k); });

  const auto& reference = table.columns.front().omega;
  for (auto& col : table.columns)
    for (std::size_t i = 0; i < rows; ++i)
      if (col.omega[i] && reference[i]) col.deviation[i] = *col.omega[i] - *reference[i];
  return table;
}

}  // namespace attractor

#endif  // ATTRACTOR_DISPERSION_HPP
