#pragma once

#include <stdexcept>
#include <string>

namespace htn {

// Configuration / model validation failures. The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Failures occurring while running a simulation, scaling pass or experiment.
// The CLI maps these to exit code 2.
class EngineError : public std::runtime_error {
 public:
  EngineError(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace htn
