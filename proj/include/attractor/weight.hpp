#ifndef ATTRACTOR_WEIGHT_HPP
#define ATTRACTOR_WEIGHT_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "attractor/error.hpp"
#include "attractor/rational.hpp"

namespace attractor {

enum class WeightKind { Gaussian, BoundedUniform, BoundedCustom };

/// Even-moment sequence mu_{2m} of a symmetric equilibrium velocity weight.
///
/// Gaussian:       mu_{2m} = (2m-1)!!  (unit Maxwellian)
/// BoundedUniform: mu_{2m} = 1/(2m+1)  (W = 1/2 on [-1, 1])
/// BoundedCustom:  user-supplied mu_2, mu_4, ..., validated to lie in (0, 1]
///                 and to be non-increasing, as any weight on [-1, 1] must.
class WeightModel {
 public:
  static WeightModel gaussian() { return WeightModel(WeightKind::Gaussian, {}); }
  static WeightModel bounded_uniform() { return WeightModel(WeightKind::BoundedUniform, {}); }
  static WeightModel bounded_custom(std::vector<Rational> moments) {
    if (moments.empty()) throw Error(ErrorCode::InvalidWeight, "ce", "custom weight needs at least mu_2");
    Rational previous(1);  // mu_0
    for (std::size_t i = 0; i < moments.size(); ++i) {
      const auto& mu = moments[i];
      const std::string label = "mu_" + std::to_string(2 * (i + 1));
      if (mu.sign() <= 0) throw Error(ErrorCode::InvalidWeight, "ce", label + " = " + mu.to_string() + " must be positive");
      if (mu > Rational(1)) throw Error(ErrorCode::InvalidWeight, "ce", label + " = " + mu.to_string() + " exceeds 1");
      if (mu > previous)
        throw Error(ErrorCode::InvalidWeight, "ce", label + " = " + mu.to_string() + " exceeds the preceding moment " + previous.to_string());
      previous = mu;
    }
    return WeightModel(WeightKind::BoundedCustom, std::move(moments));
  }

  WeightKind kind() const noexcept { return kind_; }
  bool bounded() const noexcept { return kind_ != WeightKind::Gaussian; }

  /// Number of even moments available beyond mu_0 (unbounded for the built-in kinds).
  std::size_t available_moments() const noexcept {
    return kind_ == WeightKind::BoundedCustom ? custom_.size() : static_cast<std::size_t>(-1);
  }

  Rational moment(std::size_t m) const {
    if (m == 0) return Rational(1);
    switch (kind_) {
      case WeightKind::Gaussian: return Rational(double_factorial_odd(m));
      case WeightKind::BoundedUniform: return Rational(mpz_class(1), mpz_class(static_cast<unsigned long>(2 * m + 1)));
      case WeightKind::BoundedCustom:
        if (m > custom_.size())
          throw Error(ErrorCode::OrderExceeded, "ce",
                      "custom weight supplies " + std::to_string(custom_.size()) + " moments, mu_" + std::to_string(2 * m) + " requested");
        return custom_[m - 1];
    }
    return Rational(0);
  }

  std::string_view name() const noexcept {
    switch (kind_) {
      case WeightKind::Gaussian: return "gaussian";
      case WeightKind::BoundedUniform: return "bounded-uniform";
      case WeightKind::BoundedCustom: return "bounded-custom";
    }
    return "unknown";
  }

  const std::vector<Rational>& custom_moments() const noexcept { return custom_; }

 private:
  WeightModel(WeightKind kind, std::vector<Rational> custom) : kind_(kind), custom_(std::move(custom)) {}

  WeightKind kind_;
  std::vector<Rational> custom_;
};

}  // namespace attractor

#endif  // ATTRACTOR_WEIGHT_HPP
