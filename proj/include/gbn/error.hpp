#pragma once

#include <stdexcept>
#include <string>

namespace gbn {

// Bad input: malformed files, out-of-range parameters, contract violations.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine produced something it should not have (failed
// identity, non-finite value, eigensolver breakdown).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gbn
