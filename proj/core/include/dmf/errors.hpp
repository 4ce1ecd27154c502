#pragma once

#include <stdexcept>
#include <string>

namespace dmf {

// Every failure mode the library can report.  Computations never return
// partially-filled values: they either produce a fully certified result or
// throw an Error carrying one of these codes.
enum class ErrorCode {
  NonPrimeCharacteristic,
  NoIrreducibleFound,
  DegreeTooLarge,
  InversionOfZero,
  PrecisionExhausted,
  RamificationNotDivisible,
  ContextMismatch,
  NoStabilization,
  EnumerationBudgetExceeded,
  NotConverged,
  TailNotDecaying,
  SpaceTooLarge,
  PoleHit,
  CollidingValuations,
  SingularMatrix,
  VanishingJ,
  NotIrreducible,
  NotMonic,
  NonPolynomialInverse,
  DepthTooSmall,
  ConfigInvalid,
  ParseError,
  Internal,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace dmf
