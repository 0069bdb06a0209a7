#pragma once

#include <stdexcept>
#include <string>

namespace fatigue {

/// Base for every error the library raises deliberately.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Numerical breakdown: singular localization, failed return map, zero variance.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent input data (datasets, CSV).
class DataError : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace fatigue
