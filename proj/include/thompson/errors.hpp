#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thompson {

// Malformed word or diagram text. Carries the offending token and its
// character offset in the input.
class ParseError : public std::invalid_argument {
 public:
  ParseError(std::string const& what, std::string token, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position) +
                              ": '" + token + "'"),
        token_(std::move(token)),
        position_(position) {}

  std::string const& token() const noexcept { return token_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string token_;
  std::size_t position_;
};

// An argument violates the documented precondition of an operation.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed a configured resource bound.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(std::string const& what, std::size_t radius_reached)
      : std::runtime_error(what), radius_reached_(radius_reached) {}

  std::size_t radius_reached() const noexcept { return radius_reached_; }

 private:
  std::size_t radius_reached_;
};

// An internal invariant was found broken. Never valid output; signals a bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace thompson
