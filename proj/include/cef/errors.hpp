#pragma once

#include <stdexcept>
#include <string>

namespace cef {

// Malformed or inconsistent input: bad shapes, unknown axes, unreadable files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A conditional was requested on a zero-probability event.  Carries the name
// of the degenerate margin so callers can report which parameter is undefined.
class UndefinedConditionalError : public std::runtime_error {
 public:
  explicit UndefinedConditionalError(std::string margin)
      : std::runtime_error("undefined conditional: zero-probability margin '" + margin + "'"),
        margin_(std::move(margin)) {}

  const std::string& margin() const noexcept { return margin_; }

 private:
  std::string margin_;
};

// Constraint targets outside the feasible set (e.g. |covariance target| > 1).
class InfeasibleConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver stopped before reaching tolerance; carries the last residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A density slice or sample set with no finite mass anywhere.
class EmptyDensityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cef
