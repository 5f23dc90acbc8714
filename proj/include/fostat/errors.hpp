#pragma once

#include <stdexcept>
#include <string>

namespace fostat {

/// Bad input data: malformed files, out-of-range vertices, signature
/// mismatches, violated preconditions.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Formula text that does not conform to the grammar. Carries 1-based
/// line/column of the offending token.
struct ParseError : DomainError {
  ParseError(std::string msg, int line, int column)
      : DomainError(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
  int line;
  int column;
};

/// Raised when an enumeration would exceed the work guardrail and no
/// override was given.
struct WorkLimitError : DomainError {
  using DomainError::DomainError;
};

}  // namespace fostat
