#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace logitmfg {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// exp_q hit the branch where the deformed exponential is not defined
// (only reachable for q > 1 with an out-of-range argument).
struct UndefinedDeformedExp : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of a scalar function.
struct DomainError : Error {
  using Error::Error;
};

struct InvalidGrid : Error {
  using Error::Error;
};

struct NegativeDensity : Error {
  using Error::Error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};

struct IncompatibleResolution : Error {
  using Error::Error;
};

struct EvaluationError : Error {
  using Error::Error;
};

struct UnsupportedModel : Error {
  using Error::Error;
};

// Requested time step exceeds the guaranteed stability bound (strict mode).
struct CflViolation : Error {
  using Error::Error;
};

// A cell mass became negative during explicit stepping.
struct NonnegativityLost : Error {
  using Error::Error;
};

struct NonFiniteValue : Error {
  using Error::Error;
};

// Iteration budget exhausted before reaching the requested tolerance.
struct NotConverged : Error {
  NotConverged(const std::string& msg, double residual, long iterations,
               std::vector<double> history = {})
      : Error(msg),
        residual(residual),
        iterations(iterations),
        residual_history(std::move(history)) {}
  double residual;
  long iterations;
  std::vector<double> residual_history;  // one entry per completed iteration
};

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace logitmfg
