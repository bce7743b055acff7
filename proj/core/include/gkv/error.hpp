#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gkv {

// Root of every error the engine raises. Callers that only need a
// diagnostic can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Division by a jet (or real) whose constant term is numerically zero.
class SingularValueError : public Error {
 public:
  using Error::Error;
};

// sqrt of a nonpositive constant term and similar.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A derivative was requested beyond the truncation order of the jets.
class InsufficientOrderError : public Error {
 public:
  using Error::Error;
};

class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Unknown identifiers and other load-time binding failures.
class ResolveError : public Error {
 public:
  using Error::Error;
};

class SpecFileError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, std::size_t offset,
              std::vector<std::string> expected);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace gkv
