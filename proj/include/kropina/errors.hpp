#pragma once

#include <stdexcept>
#include <string>

namespace kropina {

// Base for every error this library throws on purpose.  Anything else
// escaping a public entry point is a bug.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation outside a function's domain: division by zero, log of a
// non-positive value, and friends.
class DomainError : public Error {
  using Error::Error;
};

// Text that does not parse (expression or scene file).  Positions are 1-based.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line_(line),
        col_(col) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return col_; }

private:
  int line_, col_;
};

// Structurally valid scene with inconsistent content: bad dimension, missing
// entry, a wind that fails validation, ...
class SceneError : public Error {
public:
  SceneError(const std::string& msg, std::string field_path)
      : Error("[" + field_path + "] " + msg), field_(std::move(field_path)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

// A metric (or fundamental tensor) fails to be positive definite where the
// theory requires it.
class SingularMetricError : public Error {
  using Error::Error;
};

// Tangent vector outside the conic domain W_0 > 0.
class ConicDomainError : public Error {
  using Error::Error;
};

// An integrated curve left the chart box at time t_exit.
class ChartExitError : public Error {
public:
  ChartExitError(const std::string& msg, double t_exit)
      : Error(msg), t_exit_(t_exit) {}
  double exit_time() const noexcept { return t_exit_; }

private:
  double t_exit_;
};

// Conditioning or convergence failure in a numeric kernel.
class NumericError : public Error {
  using Error::Error;
};

}  // namespace kropina
