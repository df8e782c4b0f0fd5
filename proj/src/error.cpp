#include "gpcover/error.hpp"

namespace gpcover {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::missing_values: return "missing-values";
    case ErrorKind::degenerate_data: return "degenerate-data";
    case ErrorKind::delta_out_of_range: return "delta-out-of-range";
    case ErrorKind::insufficient_n: return "insufficient-n";
    case ErrorKind::mixed_radii: return "mixed-radii";
    case ErrorKind::violated_independence: return "violated-independence";
    case ErrorKind::grid_too_large: return "grid-too-large";
    case ErrorKind::out_of_extent: return "out-of-extent";
    case ErrorKind::malformed_input: return "malformed-input";
    case ErrorKind::invariant_breach: return "invariant-breach";
  }
  return "unknown";
}

}  // namespace gpcover
