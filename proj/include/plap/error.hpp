#pragma once

#include <stdexcept>
#include <string>

namespace plap {

/// Failure categories surfaced by the library. Each maps to a stable
/// machine-readable name used in error reports (see errc_name).
enum class errc {
  invalid_exponent,
  invalid_dimension,
  degenerate_annulus,
  mixed_sign_source,
  missing_regularization,
  domain_error,
  numerical_evaluation,
  bracket_error,
  bracket_not_found,
  convergence_failure,
  grid_error,
  config_error,
  io_error,
  unsupported_oracle,
};

/// Stable kebab-case name for an error category ("mixed-sign-source", ...).
const char* errc_name(errc kind) noexcept;

/// Exception carrying a category plus a human-readable message.
class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  errc kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept { return errc_name(kind_); }

 private:
  errc kind_;
};

}  // namespace plap
