#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrsc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed operand: non-finite entries, shape mismatch, bad argument range.
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// Invalid configuration (norm spec, synthetic config, experiment config).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A solver precondition (SB or SD structure) does not hold for the data.
class AssumptionViolated : public Error {
  public:
    AssumptionViolated(const std::string &what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// The exact constraint A = BXC has no solution.
class Infeasible : public Error {
  public:
    Infeasible(const std::string &what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// The requested (loss, regularizer) pair has no closed-form rule.
class NotSupported : public Error {
  public:
    using Error::Error;
};

/// Malformed input file. Carries the 1-based line number (0 when unknown).
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Brute-force verifier hit a non-finite objective.
class OracleError : public Error {
  public:
    using Error::Error;
};

} // namespace lrsc
