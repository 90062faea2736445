#ifndef MC_ERRORS_HPP
#define MC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mc {

/// Malformed input: wrong shape, NaN/negative entries, schema problems.
/// The CLI maps this to exit code 2.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed argument outside an operation's contract (exit code 3).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold on the data.
class PreconditionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// A point falls outside the neighbourhood where a dilation is defined.
class DomainError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// An operation needs the result of another one that was not run.
class DependencyError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

}  // namespace mc

#endif  // MC_ERRORS_HPP
