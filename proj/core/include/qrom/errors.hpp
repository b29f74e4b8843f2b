#pragma once

#include <stdexcept>
#include <string>

namespace qrom {

// Thrown when a documented numerical or structural invariant fails at runtime.
// The CLI maps this to exit code 2.
class InvariantViolation : public std::runtime_error {
  public:
    explicit InvariantViolation(const std::string &what)
        : std::runtime_error(what) {}
};

class CapExceeded : public std::invalid_argument {
  public:
    explicit CapExceeded(const std::string &what)
        : std::invalid_argument(what) {}
};

} // namespace qrom
