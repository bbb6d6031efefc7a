#ifndef ATTRACTOR_ERROR_HPP
#define ATTRACTOR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace attractor {

enum class ErrorCode {
  InvalidArgument,
  DivisionByZero,
  ZeroConstantTerm,
  NonzeroConstant,
  OrderExceeded,
  InvalidWeight,
  InsufficientData,
  SingularPadeSystem,
  PoleOnContour,
  CorrectorDiverged,
  DegenerateTangent,
  NoFoldFound,
  NoRootInInterval,
  SeriesDivergent,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ZeroConstantTerm: return "ZeroConstantTerm";
    case ErrorCode::NonzeroConstant: return "NonzeroConstant";
    case ErrorCode::OrderExceeded: return "OrderExceeded";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::SingularPadeSystem: return "SingularPadeSystem";
    case ErrorCode::PoleOnContour: return "PoleOnContour";
    case ErrorCode::CorrectorDiverged: return "CorrectorDiverged";
    case ErrorCode::DegenerateTangent: return "DegenerateTangent";
    case ErrorCode::NoFoldFound: return "NoFoldFound";
    case ErrorCode::NoRootInInterval: return "NoRootInInterval";
    case ErrorCode::SeriesDivergent: return "SeriesDivergent";
  }
  return "Unknown";
}

/// Every failure raised by the library. `module()` names the subsystem that
/// raised it (exactseries, ce, borel, spectral, dispersion, cli).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string_view module, const std::string& what)
      : std::runtime_error(std::string(module) + ": " + std::string(to_string(code)) + ": " + what),
        code_(code),
        module_(module) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

}  // namespace attractor

#endif  // ATTRACTOR_ERROR_HPP
