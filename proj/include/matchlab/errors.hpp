#pragma once

#include <stdexcept>
#include <string>

namespace matchlab {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

// Malformed or out-of-range inputs (bad profile files, index out of range,
// inconsistent utility vectors, ...).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
  const char* kind() const noexcept override { return "input_error"; }
};

// A requested computation exceeds a configured enumeration/search cap.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(what) {}
  const char* kind() const noexcept override { return "budget_error"; }
};

}  // namespace matchlab
