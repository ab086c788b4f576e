#pragma once

#include <stdexcept>
#include <string>

namespace engm {

/// Failure categories shared by every module. The numeric values are the
/// status codes of the C API (engm_status), so they must not be reordered.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Overflow = 2,
  Degenerate = 3,
  Length = 4,
  EntropyUnavailable = 5,
  ReservedBits = 6,
  DegenerateKey = 7,
  Format = 8,
  InsufficientData = 9,
  NoCrossing = 10,
  Domain = 11,
  Calibration = 12,
  Clock = 13,
  Io = 14,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace engm
