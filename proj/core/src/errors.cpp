#include "tsep/errors.hpp"

#include <cstdio>

namespace tsep {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotHermitianValued: return "NotHermitianValued";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotOnCircle: return "NotOnCircle";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotStrictlyPositive: return "NotStrictlyPositive";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::GridExhausted: return "GridExhausted";
    case ErrorCode::DecompositionFailed: return "DecompositionFailed";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::DegenerateAtom: return "DegenerateAtom";
    case ErrorCode::InconsistentAdjoints: return "InconsistentAdjoints";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadParams: return "BadParams";
  }
  return "Unknown";
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace tsep
