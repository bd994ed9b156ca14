#pragma once

#include <stdexcept>
#include <string>

namespace qmem {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Caller violated a precondition (wrong shapes, unnormalized profile, ...).
class UsageError : public Error {
public:
  using Error::Error;
};

/// An internal identity that must hold exactly (up to rounding) did not.
class NumericalConsistencyError : public Error {
public:
  using Error::Error;
};

/// A quadrature failed its doubling certification.
class AccuracyError : public NumericalConsistencyError {
public:
  using NumericalConsistencyError::NumericalConsistencyError;
};

/// Time-stepping of the propagation equations blew up.
class IntegrationError : public NumericalConsistencyError {
public:
  using NumericalConsistencyError::NumericalConsistencyError;
};

class RangeError : public Error {
public:
  using Error::Error;
};

/// Source has no squeezing to transfer (zero normally ordered correlator).
class DegenerateSourceError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace qmem
