#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace esn {

enum class ErrorKind {
  InvalidRange,
  InvalidArgument,
  DimensionMismatch,
  SpectralEstimateFailure,
  StateOverflow,
  SvdFailure,
  DegenerateVariance,
  IntegrationFailure,
  RegenerationExhausted,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the sweep
/// harness in particular) can record it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace esn
