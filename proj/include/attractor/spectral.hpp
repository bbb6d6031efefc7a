#ifndef ATTRACTOR_SPECTRAL_HPP
#define ATTRACTOR_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "attractor/error.hpp"

namespace attractor {

/// P_n(omega, k^2) scaled by exp(-log_scale), with its partial derivatives on
/// the same scale. The scale factors are positive, so signs and roots of the
/// scaled value are those of P_n.
struct SpectralEval {
  int n = 0;
  double value = 1.0;
  double log_scale = 0.0;
  double derivative_omega = 0.0;
  double derivative_k2 = 0.0;
  double second_omega = 0.0;     ///< d^2/domega^2
  double mixed_omega_k2 = 0.0;   ///< d^2/domega dk^2

  /// |P_n| / |grad P_n| in (omega, k^2): first-order distance to the zero
  /// set, independent of the running scale.
  double distance() const {
    const double g = std::hypot(derivative_omega, derivative_k2);
    return g > 0.0 ? std::fabs(value) / g : (value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  }
  /// |dP_n/domega| / |grad P_n|; zero where the branch is vertical in k.
  double slope_omega() const {
    const double g = std::hypot(derivative_omega, derivative_k2);
    return g > 0.0 ? std::fabs(derivative_omega) / g : 0.0;
  }
};

/// Three-term recurrence
///   P_0 = 1,  P_1 = omega(omega+1) + k^2,
///   P_j = [(omega+1)^2 + (4j-3) k^2] P_{j-1} - k^4 (2j-2)(2j-3) P_{j-2},
/// with derivatives carried forward alongside the values. After every step
/// the pair (P_j, P_{j-1}) and its derivatives are divided by
/// max(|P_j|, |P_{j-1}|, 1).
inline SpectralEval eval_P(int n, double omega, double k2) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "spectral", "spectral polynomial order must be non-negative");
  SpectralEval out;
  out.n = n;
  if (n == 0) return out;

  struct Jet {
    double v, w, k, ww, wk;
  };
  Jet prev{1.0, 0.0, 0.0, 0.0, 0.0};
  Jet cur{omega * (omega + 1.0) + k2, 2.0 * omega + 1.0, 1.0, 2.0, 0.0};
  const double w1 = omega + 1.0;
  const double a_w = 2.0 * w1;
  double log_scale = 0.0;
  for (int j = 2; j <= n; ++j) {
    const double jj = j;
    const double a = w1 * w1 + (4.0 * jj - 3.0) * k2;
    const double a_k = 4.0 * jj - 3.0;
    const double c = (2.0 * jj - 2.0) * (2.0 * jj - 3.0);
    const double b = k2 * k2 * c;
    const double b_k = 2.0 * k2 * c;
    Jet next;
    next.v = a * cur.v - b * prev.v;
    next.w = a_w * cur.v + a * cur.w - b * prev.w;
    next.k = a_k * cur.v + a * cur.k - b_k * prev.v - b * prev.k;
    next.ww = 2.0 * cur.v + 2.0 * a_w * cur.w + a * cur.ww - b * prev.ww;
    next.wk = a_w * cur.k + a_k * cur.w + a * cur.wk - b_k * prev.w - b * prev.wk;
    prev = cur;
    cur = next;
    const double s = std::max({std::fabs(cur.v), std::fabs(prev.v), 1.0});
    if (s > 1.0) {
      for (Jet* jet : {&cur, &prev}) {
        jet->v /= s;
        jet->w /= s;
        jet->k /= s;
        jet->ww /= s;
        jet->wk /= s;
      }
      log_scale += std::log(s);
    }
  }
  out.value = cur.v;
  out.log_scale = log_scale;
  out.derivative_omega = cur.w;
  out.derivative_k2 = cur.k;
  out.second_omega = cur.ww;
  out.mixed_omega_k2 = cur.wk;
  return out;
}

struct FoldPoint {
  double k_c = 0.0;
  double omega_c = 0.0;
  double residual = 0.0;  ///< max(distance, slope_omega) at the fold
  int iterations = 0;
};

struct BranchSample {
  double k = 0.0;
  double omega = 0.0;
  bool physical = true;  ///< false past the fold
};

struct BranchCurve {
  int n = 0;
  std::vector<BranchSample> samples;
  std::optional<FoldPoint> fold;
  double arclength = 0.0;
};

struct TraceOptions {
  double step_min = 1e-4;
  double step_max = 0.05;
  int newton_max_iterations = 25;
  int max_halvings = 6;
  double residual_tolerance = 1e-10;
  double post_fold_arclength = 0.3;   ///< unphysical continuation emitted past the fold
  double post_fold_k_drop = 0.2;      ///< or stop once k falls this far below k_c
  double max_turn = 0.3;              ///< radians between consecutive tangents
};

/// Newton on {P_n = 0, dP_n/domega = 0} in (omega, k^2).
inline FoldPoint refine_fold(int n, double k_guess, double omega_guess, int max_iterations = 50) {
  double omega = omega_guess, k2 = k_guess * k_guess;
  FoldPoint fp;
  for (int it = 1; it <= max_iterations; ++it) {
    const auto e = eval_P(n, omega, k2);
    const double det = e.derivative_omega * e.mixed_omega_k2 - e.derivative_k2 * e.second_omega;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double d_omega = -(e.value * e.mixed_omega_k2 - e.derivative_k2 * e.derivative_omega) / det;
    const double d_k2 = -(e.derivative_omega * e.derivative_omega - e.second_omega * e.value) / det;
    omega += d_omega;
    k2 += d_k2;
    fp.iterations = it;
    if (std::fabs(d_omega) <= 1e-15 * std::max(1.0, std::fabs(omega)) && std::fabs(d_k2) <= 1e-15 * std::max(1.0, k2)) break;
  }
  const auto e = eval_P(n, omega, k2);
  fp.k_c = std::sqrt(std::max(k2, 0.0));
  fp.omega_c = omega;
  fp.residual = std::max(e.distance(), e.slope_omega());
  if (!(fp.residual < 1e-10) || !std::isfinite(fp.k_c) || k2 <= 0.0)
    throw Error(ErrorCode::NoFoldFound, "spectral",
                "fold refinement for n=" + std::to_string(n) + " did not converge (residual " + std::to_string(fp.residual) + ")");
  return fp;
}

/// Pseudo-arclength continuation of P_n(omega, k^2) = 0 in the (k, omega)
/// plane from the hydrodynamic root (0, 0), heading toward increasing k.
///
/// Predictor along the unit tangent, Newton corrector constrained to the
/// hyperplane orthogonal to it. Steps adapt between step_min and step_max by
/// corrector effort; a failed corrector halves the step, at most
/// max_halvings times in a row. A sign change of dk/ds marks the fold, which
/// is refined by refine_fold; tracing continues on the unphysical side for
/// post_fold_arclength (or until k has dropped post_fold_k_drop below k_c).
inline BranchCurve trace_branch(int n, double step, double max_arclength, const TraceOptions& opt = {}) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "spectral", "branch tracing needs n >= 1");
  if (!(step > 0.0 && step <= 0.05)) throw Error(ErrorCode::InvalidArgument, "spectral", "continuation step must lie in (0, 0.05]");
  if (!(max_arclength > 0.0)) throw Error(ErrorCode::InvalidArgument, "spectral", "arclength budget must be positive");

  struct Point {
    double k, omega;
  };
  auto gradient = [n](const Point& p) {
    const auto e = eval_P(n, p.omega, p.k * p.k);
    return std::pair{2.0 * p.k * e.derivative_k2, e.derivative_omega};
  };
  auto unit_tangent = [&](const Point& p, std::pair<double, double> orient) {
    const auto [gk, gw] = gradient(p);
    const double norm = std::hypot(gk, gw);
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw Error(ErrorCode::DegenerateTangent, "spectral",
                  "null tangent at k=" + std::to_string(p.k) + ", omega=" + std::to_string(p.omega));
    std::pair<double, double> t{gw / norm, -gk / norm};
    if (t.first * orient.first + t.second * orient.second < 0.0) t = {-t.first, -t.second};
    return t;
  };

  BranchCurve curve;
  curve.n = n;
  Point z{0.0, 0.0};
  curve.samples.push_back({0.0, 0.0, true});
  auto tangent = unit_tangent(z, {1.0, 0.0});
  double h = std::clamp(step, opt.step_min, opt.step_max);
  double arclength = 0.0;
  double fold_arclength = 0.0;

  while (arclength < max_arclength) {
    int halvings = 0;
    Point next{};
    std::pair<double, double> next_tangent{};
    int used_iterations = 0;
    for (;;) {
      const Point pred{z.k + h * tangent.first, z.omega + h * tangent.second};
      Point x = pred;
      bool converged = false;
      int it = 0;
      for (it = 1; it <= opt.newton_max_iterations; ++it) {
        const auto e = eval_P(n, x.omega, x.k * x.k);
        const double gk = 2.0 * x.k * e.derivative_k2, gw = e.derivative_omega;
        const double f1 = e.value;
        const double f2 = tangent.first * (x.k - pred.k) + tangent.second * (x.omega - pred.omega);
        const double det = gk * tangent.second - gw * tangent.first;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dk = -(f1 * tangent.second - gw * f2) / det;
        const double dw = -(gk * f2 - tangent.first * f1) / det;
        x.k += dk;
        x.omega += dw;
        if (!std::isfinite(x.k) || !std::isfinite(x.omega)) break;
        if (std::hypot(dk, dw) <= 1e-13) {
          converged = eval_P(n, x.omega, x.k * x.k).distance() < opt.residual_tolerance;
          break;
        }
      }
      bool accepted = converged && x.omega > -1.0 && x.k >= 0.0;
      if (accepted) {
        next_tangent = unit_tangent(x, tangent);
        const double turn = std::acos(std::clamp(next_tangent.first * tangent.first + next_tangent.second * tangent.second, -1.0, 1.0));
        accepted = turn <= opt.max_turn || h <= opt.step_min;
      }
      if (accepted) {
        next = x;
        used_iterations = it;
        break;
      }
      if (++halvings > opt.max_halvings || h <= opt.step_min) {
        if (x.omega <= -1.0 && converged) return curve;  // the branch runs into the kinetic root
        throw Error(ErrorCode::CorrectorDiverged, "spectral",
                    "corrector failed for n=" + std::to_string(n) + " near k=" + std::to_string(z.k) + ", omega=" + std::to_string(z.omega));
      }
      h = std::max(0.5 * h, opt.step_min);
    }

    const double ds = std::hypot(next.k - z.k, next.omega - z.omega);
    arclength += ds;
    const bool crossed_fold = !curve.fold && tangent.first > 0.0 && next_tangent.first <= 0.0;
    if (crossed_fold) {
      const Point& seed = next.k > z.k ? next : z;
      curve.fold = refine_fold(n, seed.k, seed.omega);
      curve.samples.push_back({curve.fold->k_c, curve.fold->omega_c, true});
      fold_arclength = arclength;
    }
    curve.samples.push_back({next.k, next.omega, !curve.fold.has_value()});
    z = next;
    tangent = next_tangent;

    if (curve.fold && (arclength - fold_arclength >= opt.post_fold_arclength || z.k <= curve.fold->k_c - opt.post_fold_k_drop)) break;

    if (used_iterations <= 3)
      h = std::min(2.0 * h, opt.step_max);
    else if (used_iterations > 8)
      h = std::max(0.5 * h, opt.step_min);
    h = std::min(h, std::max(opt.step_min, max_arclength - arclength));
  }
  curve.arclength = arclength;
  return curve;
}

/// Fold of the P_n branch. When `bracket_hint` is given the fold must fall
/// inside [k_lo, k_hi].
inline FoldPoint find_fold(int n, std::optional<std::pair<double, double>> bracket_hint = std::nullopt, double max_arclength = 5.0) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "spectral", "fold search needs n >= 1");
  const auto curve = trace_branch(n, 0.01, max_arclength);
  if (!curve.fold)
    throw Error(ErrorCode::NoFoldFound, "spectral", "branch n=" + std::to_string(n) + " stays monotone in k within the arclength budget");
  if (bracket_hint && (curve.fold->k_c < bracket_hint->first || curve.fold->k_c > bracket_hint->second))
    throw Error(ErrorCode::NoFoldFound, "spectral",
                "fold of n=" + std::to_string(n) + " at k=" + std::to_string(curve.fold->k_c) + " lies outside the hinted bracket");
  return *curve.fold;
}

/// Root of P_n(., k^2) near `omega_seed` by Newton in omega.
inline std::optional<double> branch_root(int n, double k, double omega_seed, int max_iterations = 50) {
  double omega = omega_seed;
  for (int it = 0; it < max_iterations; ++it) {
    const auto e = eval_P(n, omega, k * k);
    if (e.derivative_omega == 0.0) return std::nullopt;
    const double d = e.value / e.derivative_omega;
    omega -= d;
    if (!std::isfinite(omega)) return std::nullopt;
    if (std::fabs(d) <= 1e-15 * std::max(1.0, std::fabs(omega))) return omega;
  }
  return std::nullopt;
}

/// Physical-branch value at k, refined from the traced samples; nullopt past
/// the fold.
inline std::optional<double> branch_value(const BranchCurve& curve, double k) {
  if (k == 0.0) return 0.0;
  if (curve.fold && k > curve.fold->k_c) return std::nullopt;
  const BranchSample* lo = nullptr;
  const BranchSample* hi = nullptr;
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    const auto& a = curve.samples[i - 1];
    const auto& b = curve.samples[i];
    if (!a.physical || !b.physical) break;
    if (a.k <= k && k <= b.k) {
      lo = &a;
      hi = &b;
      break;
    }
  }
  if (!lo) return std::nullopt;
  const double t = hi->k > lo->k ? (k - lo->k) / (hi->k - lo->k) : 0.0;
  const double seed = lo->omega + t * (hi->omega - lo->omega);
  if (curve.fold && std::fabs(k - curve.fold->k_c) < 1e-9) return curve.fold->omega_c;
  auto root = branch_root(curve.n, k, seed);
  if (!curve.fold) return root;
  // Near the fold the two roots merge and Newton stalls or jumps to the
  // unphysical side; bisect between omega_c and the first sign change above it.
  if (root && *root >= curve.fold->omega_c - 1e-9) return root;
  const double k2 = k * k;
  double w_lo = curve.fold->omega_c;
  const bool lo_positive = eval_P(curve.n, w_lo, k2).value > 0.0;
  double step = 1e-3, w_hi = std::max(seed, w_lo) + step;
  while ((eval_P(curve.n, w_hi, k2).value > 0.0) == lo_positive) {
    step *= 2.0;
    w_hi += step;
    if (w_hi > 0.5) return std::nullopt;
  }
  for (int it = 0; it < 200 && w_hi - w_lo > 1e-16 * std::max(1.0, std::fabs(w_hi)); ++it) {
    const double mid = 0.5 * (w_lo + w_hi);
    if ((eval_P(curve.n, mid, k2).value > 0.0) == lo_positive) w_lo = mid; else w_hi = mid;
  }
  return 0.5 * (w_lo + w_hi);
}

}  // namespace attractor

#endif  // ATTRACTOR_SPECTRAL_HPP
