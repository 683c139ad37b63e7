#pragma once

#include <stdexcept>
#include <string>

namespace snw {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotHermitian,
  ValidationFailed,  // density-operator invariant violated; detail names it
  OverlapViolation,
  SearchFailed,
  NotPrime,
  InvalidRotation,
  NoFrames,
  Io,
  Parse,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::string detail = {}, double residual = 0.0)
      : std::runtime_error(what), code_(code), detail_(std::move(detail)), residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  /// Failed invariant name for ValidationFailed ("trace", "hermiticity", ...).
  const std::string& detail() const noexcept { return detail_; }
  /// Best residual reached, for SearchFailed.
  double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  std::string detail_;
  double residual_;
};

}  // namespace snw
