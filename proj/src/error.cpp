#include "engm/error.hpp"

namespace engm {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::Length: return "length";
    case ErrorCode::EntropyUnavailable: return "entropy unavailable";
    case ErrorCode::ReservedBits: return "reserved bits";
    case ErrorCode::DegenerateKey: return "degenerate key";
    case ErrorCode::Format: return "format";
    case ErrorCode::InsufficientData: return "insufficient data";
    case ErrorCode::NoCrossing: return "no crossing";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Calibration: return "calibration";
    case ErrorCode::Clock: return "clock";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code) {}

}  // namespace engm
