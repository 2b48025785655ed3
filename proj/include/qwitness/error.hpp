#pragma once

#include <stdexcept>
#include <string>

namespace qwitness {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (non-unit Bloch vector,
/// non-Hermitian operator, bad party index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// An operator identity that must hold algebraically was violated numerically.
class IdentityError : public Error {
 public:
  IdentityError(std::string identity, double residual, double threshold)
      : Error("identity '" + identity + "' violated: residual " + std::to_string(residual) +
              " > " + std::to_string(threshold)),
        identity_(std::move(identity)),
        residual_(residual) {}
  const std::string& identity() const noexcept { return identity_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string identity_;
  double residual_;
};

/// Exhaustive enumeration refused because the strategy space is too large.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

}  // namespace qwitness
