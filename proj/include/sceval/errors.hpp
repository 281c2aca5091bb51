#pragma once

#include <stdexcept>
#include <string>

namespace sceval {

// Bad input data: malformed files, domain violations, missing columns.
// CLI maps these to exit code 1.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed record in a line-oriented source; carries the 1-based line number.
struct ParseError : InputError {
  ParseError(std::size_t line_no, const std::string& reason)
      : InputError("line " + std::to_string(line_no) + ": " + reason),
        line(line_no) {}
  std::size_t line;
};

}  // namespace sceval
