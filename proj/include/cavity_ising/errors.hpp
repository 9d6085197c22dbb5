#pragma once

#include <stdexcept>
#include <string>

namespace cavity_ising {

/// Base class for failures of an iterative or numerical procedure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoSignChange : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MaxIterExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MaxDepthExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BracketFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigenFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Evaluation requested at a point where the quantity diverges.
class SingularPoint : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Argument outside the range where an operation is defined (e.g. a coupling
/// for which no first-order boundary exists).
class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace cavity_ising
