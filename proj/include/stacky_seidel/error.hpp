#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stacky_seidel {

enum class ErrorKind {
  parse_error,
  validation_error,
  not_simplicial,
  not_complete,
  not_in_k,
  not_a_box,
  inconsistent_anticone,
  non_integral_basis,
  index_out_of_range,
  weak_fano_violation,
  sector_projection_failure,
  scale_too_small,
  caps_explosion,
  incompatible_caps,
  nonzero_constant_term,
  negative_exponent_escape,
  zero_denominator_factor,
  non_integral_d,
  not_weak_fano_behavior,
  y0_dependence_detected,
  internal_error,
};

constexpr std::string_view kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::validation_error: return "ValidationError";
    case ErrorKind::not_simplicial: return "NotSimplicial";
    case ErrorKind::not_complete: return "NotComplete";
    case ErrorKind::not_in_k: return "NotInK";
    case ErrorKind::not_a_box: return "NotABox";
    case ErrorKind::inconsistent_anticone: return "InconsistentAnticone";
    case ErrorKind::non_integral_basis: return "NonIntegralBasis";
    case ErrorKind::index_out_of_range: return "IndexOutOfRange";
    case ErrorKind::weak_fano_violation: return "WeakFanoViolation";
    case ErrorKind::sector_projection_failure: return "SectorProjectionFailure";
    case ErrorKind::scale_too_small: return "ScaleTooSmall";
    case ErrorKind::caps_explosion: return "CapsExplosion";
    case ErrorKind::incompatible_caps: return "IncompatibleCaps";
    case ErrorKind::nonzero_constant_term: return "NonzeroConstantTerm";
    case ErrorKind::negative_exponent_escape: return "NegativeExponentEscape";
    case ErrorKind::zero_denominator_factor: return "ZeroDenominatorFactor";
    case ErrorKind::non_integral_d: return "NonIntegralD";
    case ErrorKind::not_weak_fano_behavior: return "NotWeakFanoBehavior";
    case ErrorKind::y0_dependence_detected: return "Y0DependenceDetected";
    case ErrorKind::internal_error: return "InternalError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// internal invariant check; failures are bugs, not bad input
inline void ensure(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::internal_error, what);
}

}  // namespace stacky_seidel
