#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace antimatroid {

// Malformed or out-of-range input supplied by a caller.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : InputError("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// An operation was called outside its documented domain.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Brute-force routines refuse ground sets that are too large.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceLimitError : public std::runtime_error {
 public:
  ResourceLimitError(const std::string& message, std::size_t partial_size)
      : std::runtime_error(message), partial_size_(partial_size) {}

  std::size_t partial_size() const noexcept { return partial_size_; }

 private:
  std::size_t partial_size_;
};

// Protocol misuse, e.g. answering a query twice.
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace antimatroid
