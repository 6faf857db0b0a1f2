#pragma once

#include <stdexcept>
#include <string>

namespace density_lab {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto exit codes (parse 2, precondition 3, verification 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Element or set does not fit the group it is used with.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An enumeration or materialization would exceed a configured cap.
class CapExceeded : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A computed object failed its exact re-verification. `counterexample`
// carries a human-readable minimal witness.
class VerificationError : public Error {
 public:
  VerificationError(const std::string& what, std::string counterexample)
      : Error(what + ": " + counterexample), counterexample_(std::move(counterexample)) {}

  const std::string& counterexample() const noexcept { return counterexample_; }

 private:
  std::string counterexample_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"
                       : what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace density_lab
