#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (sizes, grids, ranges).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A multiplier whose output would not be real.
class NonHermitianMultiplier : public Error {
 public:
  using Error::Error;
};

// Map failed the Jacobian floor or the inverse did not converge.
class DiffeoError : public Error {
 public:
  DiffeoError(const std::string& what, double residual = 0.0) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Time integration stopped early (CFL violation, non-finite values, lost diffeo).
class SolverAbort : public Error {
 public:
  enum class Reason { cfl, non_finite, diffeo };
  SolverAbort(Reason reason, double time, const std::string& what)
      : Error(what), reason_(reason), time_(time) {}
  Reason reason() const { return reason_; }
  double time() const { return time_; }

 private:
  Reason reason_;
  double time_;
};

// Probe direction produces no measurable response at the hump center.
class DegenerateProbe : public Error {
 public:
  using Error::Error;
};

// Hump radius too small for the grid.
class UnderResolved : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-range configuration, with the offending location.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace sqg
