#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrfhss {

// Precondition or configuration violation.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A consumer needed data (a curve, a combo at some node count) that the
// supplied records do not contain.
class IncompleteData : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Output sink failure. Carries how many rows made it out before the failure.
class IoError : public std::runtime_error {
public:
  IoError(const std::string& what, std::size_t rows_written)
      : std::runtime_error(what), rows_written_(rows_written) {}

  std::size_t rows_written() const noexcept { return rows_written_; }

private:
  std::size_t rows_written_;
};

}  // namespace lrfhss
