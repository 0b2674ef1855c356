#pragma once

#include <stdexcept>
#include <string>

namespace lotflow {

// Malformed or inconsistent input data (dimension mismatch, bad JSON, ...).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Instance too large for the exhaustive oracle.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

// The LP solver hit its iteration cap or lost accuracy.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lotflow
