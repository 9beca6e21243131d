#pragma once

#include <stdexcept>
#include <string>

namespace ddp {

/// Bad argument or violated precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Data whose range cannot support a scale estimate (e.g. all values equal).
class DegenerateScale : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite quantity met during sampling or evaluation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace ddp
