#pragma once

#include <stdexcept>
#include <string>

namespace symqt {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad tables, out-of-range indices, schema violations.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A linear system that should be consistent left a residual above tolerance.
class ResidualError : public Error {
 public:
  ResidualError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A mathematical hypothesis of the requested construction does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// A brute-force search would exceed the configured size cap.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace symqt
