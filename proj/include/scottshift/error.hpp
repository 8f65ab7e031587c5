#pragma once

#include <stdexcept>
#include <string>

namespace scottshift {

// Base of every error raised by the library. The CLI maps these onto exit
// codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Coupling above the critical value of the channel being assembled.
class SupercriticalError : public DomainError {
 public:
  SupercriticalError(const std::string& what, double critical)
      : DomainError(what), critical_(critical) {}
  double critical() const noexcept { return critical_; }

 private:
  double critical_;
};

// An iterative procedure (quadrature, eigensolver, shooting, minimizer)
// stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved = 0.0)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// The momentum or radial grid cannot resolve what was asked of it.
class GridResolutionError : public Error {
 public:
  using Error::Error;
};

// Bad command-line usage; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace scottshift
