#ifndef ATTRACTOR_SPECIAL_HPP
#define ATTRACTOR_SPECIAL_HPP

#include <cmath>
#include <numbers>

namespace attractor {

/// Scaled complementary error function exp(z^2) erfc(z) for z >= 0.
///
/// Below z = 8 the product is formed directly, with exp(z^2) split into the
/// rounded square and its fma remainder so the exponent carries no rounding
/// error. Above it the Laplace continued fraction
///   1/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
/// is evaluated bottom-up; 60 levels are far more than needed there.
inline double erfcx(double z) {
  if (z < 0.0) return 2.0 * std::exp(z * z) - erfcx(-z);
  if (z < 8.0) {
    const double hi = z * z;
    const double lo = std::fma(z, z, -hi);
    return std::exp(hi) * std::exp(lo) * std::erfc(z);
  }
  double tail = z;
  for (int j = 60; j >= 1; --j) tail = z + (0.5 * j) / tail;
  return std::numbers::inv_sqrtpi / tail;
}

}  // namespace attractor

#endif  // ATTRACTOR_SPECIAL_HPP
