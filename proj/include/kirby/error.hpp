#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kirby {

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDiagram : public Error {
 public:
  using Error::Error;
};

/// A move whose preconditions do not hold on the diagram it was applied to.
class MoveError : public Error {
 public:
  using Error::Error;
};

/// Raised by apply_script / replay; carries the 0-based index of the failing step.
class ScriptError : public Error {
 public:
  ScriptError(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace kirby
