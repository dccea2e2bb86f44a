#pragma once

#include <stdexcept>
#include <string>

namespace drc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An algorithm was asked for more than it is sized to handle.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A design (or every design in a search) violates a constraint.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string constraint, std::string where, const std::string& detail)
      : Error(constraint + " violated at " + where + (detail.empty() ? "" : ": " + detail)),
        constraint_(std::move(constraint)),
        where_(std::move(where)) {}

  const std::string& constraint() const noexcept { return constraint_; }
  const std::string& where() const noexcept { return where_; }

 private:
  std::string constraint_;
  std::string where_;
};

/// A stochastic procedure failed to settle within its hard cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace drc
