#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace issv {

enum class ErrorKind {
  Domain,      // argument outside the mathematical domain of an operation
  Shape,       // grid functions on mismatched grids
  Overflow,    // bracket growth ran past representable range
  Parse,       // expression syntax / identifier errors
  Evaluation,  // expression evaluation failed (ln of nonpositive, unbound var)
  BlowUp,      // non-finite state during time integration
  Solver,      // linear / shooting solver failure
  Constraint,  // gain-parameter or precondition constraint violated
  Config,      // malformed scenario or inconsistent selector
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorKind::Parse, "at position " + std::to_string(position) + ": " + message),
        position_(position),
        message_(message) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

class BlowUpError : public Error {
 public:
  explicit BlowUpError(double t)
      : Error(ErrorKind::BlowUp, "non-finite state at t = " + std::to_string(t)), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Names the floor or precondition that failed so reports can quote it.
class ConstraintError : public Error {
 public:
  ConstraintError(std::string constraint, const std::string& detail)
      : Error(ErrorKind::Constraint, constraint + ": " + detail), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace issv
