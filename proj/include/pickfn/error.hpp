#ifndef PICKFN_ERROR_HPP
#define PICKFN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pickfn {

// Base class for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on the input was violated (invalid measure, point on a
// singular set, parameter out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure did not reach its tolerance. Carries the last
// residual/error estimate so callers can report it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual estimate " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace pickfn

#endif  // PICKFN_ERROR_HPP
