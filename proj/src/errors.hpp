#pragma once

#include <stdexcept>
#include <string>

namespace eeclass {

// Malformed input data or file format. The CLI reports these with exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: factorization breakdown, optimizer non-convergence,
// degenerate geometry. The CLI reports these with exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure: file cannot be opened, read, or written. The CLI folds
// these into the data/format bucket (exit code 2).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eeclass
