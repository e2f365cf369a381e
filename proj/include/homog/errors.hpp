#pragma once

#include <stdexcept>
#include <string>

namespace homog {

/// Error categories surfaced by the library. The CLI maps these to a
/// machine-readable error block and a nonzero exit status.
enum class ErrorCode {
  dimension_mismatch,
  nonpositive_eps,
  degenerate_extents,
  projection_unresolvable,
  not_spd,
  no_positive_spectrum,
  no_negative_spectrum,
  bracket_not_found,
  step_size_underflow,
  blow_up,
  on_null_cone,
  constraint_unreachable,
  max_iterations,
  lanczos_nonconvergence,
  packing_infeasible,
  bracket_nonpositive,
  precondition_failed,
  solver_inapplicable,
  unsupported_dimension,
  config_invalid,
  file_missing,
  io_failure,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::nonpositive_eps: return "NonpositiveEps";
    case ErrorCode::degenerate_extents: return "DegenerateExtents";
    case ErrorCode::projection_unresolvable: return "ProjectionUnresolvable";
    case ErrorCode::not_spd: return "NotSPD";
    case ErrorCode::no_positive_spectrum: return "NoPositiveSpectrum";
    case ErrorCode::no_negative_spectrum: return "NoNegativeSpectrum";
    case ErrorCode::bracket_not_found: return "BracketNotFound";
    case ErrorCode::step_size_underflow: return "StepSizeUnderflow";
    case ErrorCode::blow_up: return "BlowUp";
    case ErrorCode::on_null_cone: return "OnNullCone";
    case ErrorCode::constraint_unreachable: return "ConstraintUnreachable";
    case ErrorCode::max_iterations: return "MaxIterations";
    case ErrorCode::lanczos_nonconvergence: return "LanczosNonConvergence";
    case ErrorCode::packing_infeasible: return "PackingInfeasible";
    case ErrorCode::bracket_nonpositive: return "BracketNonpositive";
    case ErrorCode::precondition_failed: return "PreconditionFailed";
    case ErrorCode::solver_inapplicable: return "SolverInapplicable";
    case ErrorCode::unsupported_dimension: return "UnsupportedDimension";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::file_missing: return "FileMissing";
    case ErrorCode::io_failure: return "IoFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool cond, ErrorCode code, const std::string& message) {
  if (!cond) raise(code, message);
}

}  // namespace homog
