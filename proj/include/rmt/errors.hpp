#ifndef RMT_ERRORS_HPP_
#define RMT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rmt {

// Invalid parameters or inconsistent specification. CLI exit code 2.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input data (non-finite entries, bad matrix file). CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system failures. CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative method failed to converge and no fallback applied. CLI exit 4.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rmt

#endif  // RMT_ERRORS_HPP_
