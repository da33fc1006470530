#pragma once

#include <stdexcept>
#include <string>

namespace rmt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions or other broken structural preconditions.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A numeric argument outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Every hypothesis score is exactly zero, so the posterior is undefined.
class DegeneratePosterior : public Error {
 public:
  using Error::Error;
};

/// Input too large for an exhaustive routine.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Formula evaluated outside the domain where it is valid.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Scenario generation could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmt
