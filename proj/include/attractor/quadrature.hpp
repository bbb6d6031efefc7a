#ifndef ATTRACTOR_QUADRATURE_HPP
#define ATTRACTOR_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "attractor/error.hpp"

namespace attractor {

/// Nodes and weights for  int_0^inf e^-t f(t) dt ~ sum w_i f(t_i).
struct GaussLaguerreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Newton iteration on the Laguerre recurrence, in long double, seeded with
/// the usual asymptotic guesses for successive zeros.
inline GaussLaguerreRule gauss_laguerre(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "borel", "Gauss-Laguerre rule needs at least one node");
  GaussLaguerreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const auto nn = static_cast<long double>(n);
  long double z = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0L / (1.0L + 2.4L * nn);
    } else if (i == 1) {
      z += 15.0L / (1.0L + 2.5L * nn);
    } else {
      const auto ai = static_cast<long double>(i - 1);
      z += (1.0L + 2.55L * ai) / (1.9L * ai) * (z - static_cast<long double>(rule.nodes[i - 2]));
    }
    long double p1 = 1.0L, p2 = 0.0L, dp = 1.0L;
    for (int iter = 0; iter < 100; ++iter) {
      p1 = 1.0L;
      p2 = 0.0L;
      for (std::size_t j = 1; j <= n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        const auto jj = static_cast<long double>(j);
        p1 = ((2.0L * jj - 1.0L - z) * p2 - (jj - 1.0L) * p3) / jj;
      }
      dp = (nn * p1 - nn * p2) / z;
      const long double step = p1 / dp;
      z -= step;
      if (std::fabs(step) <= 1e-17L * std::fmax(1.0L, z)) break;
    }
    rule.nodes[i] = static_cast<double>(z);
    rule.weights[i] = static_cast<double>(-1.0L / (dp * nn * p2));
  }
  return rule;
}

/// Adaptive 7/15-point Gauss-Kronrod on [a, b] with recursive bisection.
template <typename F>
double adaptive_gauss_kronrod(F&& f, double a, double b, double abs_tol = 1e-13, int max_depth = 30) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
      0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
      0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                               0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  struct Panel {
    double estimate;
    double error;
  };
  auto panel = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    const double fc = f(c);
    double kron = wk[7] * fc, gauss = wg[3] * fc;
    for (std::size_t j = 0; j < 7; ++j) {
      const double dx = h * xk[j];
      const double fs = f(c - dx) + f(c + dx);
      kron += wk[j] * fs;
      if (j % 2 == 1) gauss += wg[j / 2] * fs;
    }
    return Panel{kron * h, std::fabs((kron - gauss) * h)};
  };
  auto recurse = [&](auto&& self, double lo, double hi, double tol, int depth) -> double {
    const Panel p = panel(lo, hi);
    if (p.error <= tol || depth >= max_depth) return p.estimate;
    const double mid = 0.5 * (lo + hi);
    return self(self, lo, mid, 0.5 * tol, depth + 1) + self(self, mid, hi, 0.5 * tol, depth + 1);
  };
  return recurse(recurse, a, b, abs_tol, 0);
}

}  // namespace attractor

#endif  // ATTRACTOR_QUADRATURE_HPP
