#pragma once

#include <stdexcept>
#include <string>

namespace pamctl {

// Base of every library error. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A configuration value violates a documented constraint.
class ConfigError : public Error {
public:
  using Error::Error;
};

// A run produced a non-finite value; message carries step index and state.
class NumericalError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

// Precondition of an analysis operation not met (empty window, short series...).
class AnalysisError : public Error {
public:
  using Error::Error;
};

} // namespace pamctl
