#pragma once

#include <stdexcept>
#include <string>

namespace gpcover {

enum class ErrorKind {
  invalid_argument,
  numerical_failure,
  missing_values,
  degenerate_data,
  delta_out_of_range,
  insufficient_n,
  mixed_radii,
  violated_independence,
  grid_too_large,
  out_of_extent,
  malformed_input,
  invariant_breach,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gpcover
