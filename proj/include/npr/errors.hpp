#pragma once

#include <stdexcept>
#include <string>

namespace npr {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operand shapes do not match the operation.
struct ShapeError : Error {
  using Error::Error;
};

// A batch was rejected (non-finite loss terms, too many dropped samples).
struct BatchError : Error {
  int offending_index = -1;
  BatchError(const std::string& what, int index) : Error(what), offending_index(index) {}
};

// Invalid configuration (bad field values, unresolvable names).
struct ConfigError : Error {
  std::string field;
  ConfigError(const std::string& what, std::string f = {}) : Error(what), field(std::move(f)) {}
};

// MCMC could not produce usable chains.
struct McmcError : Error {
  using Error::Error;
};

// Training diverged beyond the retry policy.
struct TrainingError : Error {
  using Error::Error;
};

// A simulator call failed (timeout, malformed response, wrong dimension).
struct SimulatorError : Error {
  std::string raw_payload;
  SimulatorError(const std::string& what, std::string raw = {})
      : Error(what), raw_payload(std::move(raw)) {}
};

}  // namespace npr
