#ifndef THERMOSHIFT_ERRORS_HPP
#define THERMOSHIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thermoshift {

// Every failure the library reports carries one of these codes so callers
// (in particular the command line tool) can map it to a process exit status
// without string matching.
enum class ErrorCode {
  NotSquare,
  NotZeroOne,
  TooSmall,
  NotIrreducible,
  IsPermutation,
  WordTooShort,
  NotAdmissible,
  DepthTooSmall,
  DepthTooLarge,
  MatrixMismatch,
  KindMismatch,
  NotDecodable,
  BadInput,
  NoConvergence,
  NoBracket,
  ContractViolation,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace thermoshift

#endif
