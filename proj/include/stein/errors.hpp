#pragma once

#include <stdexcept>
#include <string>

namespace stein {

/// Argument outside the mathematical domain of an operation (x < 0, p < 3, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure did not converge or produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that must be positive definite is not.
class NotPositiveDefinite : public NumericalError {
 public:
  NotPositiveDefinite(const std::string& what, double eigenvalue)
      : NumericalError(what), eigenvalue_(eigenvalue) {}
  explicit NotPositiveDefinite(double eigenvalue)
      : NotPositiveDefinite("matrix is not positive definite: smallest eigenvalue " + std::to_string(eigenvalue),
                            eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// An estimator was requested without the constants it depends on.
class MissingConstants : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed user input (files, flags).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stein
