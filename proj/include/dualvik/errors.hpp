#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dualvik {

// Bad input: malformed files, mismatched carriers, violated preconditions.
// The CLI maps this (and ParseError/CapExceeded) to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A request exceeded a configured enumeration/materialization cap.
class CapExceeded : public ValidationError {
public:
  explicit CapExceeded(const std::string& what) : ValidationError(what) {}
};

// Term-syntax error; `position` is a byte offset into the input.
class ParseError : public ValidationError {
public:
  ParseError(const std::string& what, std::size_t position)
      : ValidationError(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

}  // namespace dualvik
