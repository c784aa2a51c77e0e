#pragma once

#include <stdexcept>
#include <string>

namespace ktrr {

/// Base class for all library errors. `step()` names the pipeline stage that
/// raised it (empty when raised outside a pipeline run).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string step = {})
      : std::runtime_error(step.empty() ? what : step + ": " + what), step_(std::move(step)) {}

  const std::string& step() const noexcept { return step_; }

 private:
  std::string step_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The regularized kernel could not be factorized or inverted.
class DegenerateKernel : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ktrr
