#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flowgnn {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes, lengths or counts that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Data violates a documented invariant (NaN target, broken simplex, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Datasets or checkpoints whose feature schemas disagree.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The greedy router could not reach its target.
class RouteFailed : public Error {
 public:
  using Error::Error;
};

// Generation or labelling of one synthetic sample failed; callers regenerate.
class SampleFailed : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace flowgnn
