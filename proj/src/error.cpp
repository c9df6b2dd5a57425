#include "esn/error.hpp"

namespace esn {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidRange: return "invalid-range";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::SpectralEstimateFailure: return "spectral-estimate-failure";
    case ErrorKind::StateOverflow: return "state-overflow";
    case ErrorKind::SvdFailure: return "svd-failure";
    case ErrorKind::DegenerateVariance: return "degenerate-variance";
    case ErrorKind::IntegrationFailure: return "integration-failure";
    case ErrorKind::RegenerationExhausted: return "regeneration-exhausted";
    case ErrorKind::ConfigError: return "config-error";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

}  // namespace esn
