#pragma once

#include <stdexcept>
#include <string>

namespace sesample {

// Malformed or inconsistent input data (files, ids, shapes).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied an invalid option or parameter combination.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An internal invariant was violated; indicates a bug, not bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sesample
