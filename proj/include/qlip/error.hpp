#pragma once

#include <stdexcept>
#include <string>

namespace qlip {

enum class ErrorCode {
  NotSymmetric,
  NotPsd,
  DimensionMismatch,
  Nonfinite,
  ScqFails,
  NominalInfeasible,
  NominalUnbounded,
  NotAGraphPoint,
  InfeasiblePoint,
  InconsistentNumerics,
  NotLinear,
  NotSquare,
  D0NotInFamily,
  SolverFailure,
  SizeCapExceeded,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotSymmetric: return "NOT_SYMMETRIC";
    case ErrorCode::NotPsd: return "NOT_PSD";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::Nonfinite: return "NONFINITE";
    case ErrorCode::ScqFails: return "SCQ_FAILS";
    case ErrorCode::NominalInfeasible: return "NOMINAL_INFEASIBLE";
    case ErrorCode::NominalUnbounded: return "NOMINAL_UNBOUNDED";
    case ErrorCode::NotAGraphPoint: return "NOT_A_GRAPH_POINT";
    case ErrorCode::InfeasiblePoint: return "INFEASIBLE_POINT";
    case ErrorCode::InconsistentNumerics: return "INCONSISTENT_NUMERICS";
    case ErrorCode::NotLinear: return "NOT_LINEAR";
    case ErrorCode::NotSquare: return "NOT_SQUARE";
    case ErrorCode::D0NotInFamily: return "D0_NOT_IN_FAMILY";
    case ErrorCode::SolverFailure: return "SOLVER_FAILURE";
    case ErrorCode::SizeCapExceeded: return "SIZE_CAP_EXCEEDED";
    case ErrorCode::ParseError: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace qlip
