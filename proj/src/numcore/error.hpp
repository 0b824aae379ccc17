#pragma once

#include <stdexcept>
#include <string>

namespace lesam {

enum class Errc {
  zero_direction,
  dim_mismatch,
  capability_missing,
  no_convergence,
  parse_error,
  validation_error,
  divergence,
  io_error,
  invalid_argument,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::zero_direction: return "ZeroDirection";
    case Errc::dim_mismatch: return "DimMismatch";
    case Errc::capability_missing: return "CapabilityMissing";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::divergence: return "DivergenceError";
    case Errc::io_error: return "IoError";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::internal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace lesam
