#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lorentz_iso {

/// Failure categories raised by the library. Each maps to one of the error
/// classes named in the module contracts; the CLI turns them into exit codes.
enum class ErrorKind {
  dimension,
  signature,
  degenerate_input,
  parameter,
  invalid_point,
  invalid_profile,
  stencil,
  conformality,
  causality,
  frame,
  umbilic,
  consistency,
  degenerate_surface,
  degenerate_transform,
  non_integrable,
  initial_condition,
  lift_singularity,
  jet_order,
  input,
};

std::string_view to_string(ErrorKind kind);

/// True for the kinds that signal a violated geometric hypothesis (degenerate
/// polar, umbilic, lift singularity, ...) rather than bad input.
bool is_hypothesis_failure(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lorentz_iso
