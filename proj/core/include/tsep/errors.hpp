#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsep {

enum class ErrorCode {
  NotHermitian,
  NotHermitianValued,
  NotPSD,
  NotOnCircle,
  NotUnitary,
  NotPositive,
  NotStrictlyPositive,
  DimensionMismatch,
  NoConvergence,
  GridExhausted,
  DecompositionFailed,
  BudgetExhausted,
  DegenerateAtom,
  InconsistentAdjoints,
  ZeroInput,
  ParseError,
  BadParams,
};

std::string_view to_string(ErrorCode code);

/// %.6g, for numbers quoted in messages.
std::string fmt(double x);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tsep
