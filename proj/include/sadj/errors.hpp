#pragma once

#include <stdexcept>
#include <string>

namespace sadj {

// Invalid arguments or violated preconditions. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failures of a numerical procedure on otherwise valid input (exit code 1).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class SingularError : public InputError {
 public:
  using InputError::InputError;
};

class SectorError : public InputError {
 public:
  using InputError::InputError;
};

class RepresentationError : public InputError {
 public:
  using InputError::InputError;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvariantError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sadj
