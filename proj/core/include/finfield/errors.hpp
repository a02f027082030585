#pragma once

#include <stdexcept>
#include <string>

namespace finfield {

// Base type for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments: unknown sites, mismatched spaces, malformed tables.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested configuration space exceeds the dense-enumeration cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Strict or weak positivity required but not satisfied by the input.
class PositivityError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an event of probability zero.
class NullConditionError : public Error {
 public:
  using Error::Error;
};

// A one-point conditional is undefined: its denominator vanishes.
class UndefinedConditionalError : public Error {
 public:
  using Error::Error;
};

// A chosen reference state is not a positivity point of the system.
class InvalidPositivityPointError : public Error {
 public:
  using Error::Error;
};

// A consistency verification failed; the message renders the worst witness.
class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& what, double max_violation)
      : Error(what), max_violation_(max_violation) {}
  double max_violation() const { return max_violation_; }

 private:
  double max_violation_;
};

// Reconstructions disagreed across site enumerations or base configurations.
class InvarianceError : public Error {
 public:
  InvarianceError(const std::string& what, double max_deviation)
      : Error(what), max_deviation_(max_deviation) {}
  double max_deviation() const { return max_deviation_; }

 private:
  double max_deviation_;
};

// Malformed or mismatched interchange documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace finfield
