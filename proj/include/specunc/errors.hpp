#pragma once

#include <stdexcept>
#include <string>

namespace specunc {

// Malformed or out-of-domain input (CLI exit code 1).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Data that no spectrum can produce: indefinite Toeplitz or Pick matrices,
// singular data where positive data is required (CLI exit code 2).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Solver or root-finding breakdown (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace specunc
