#pragma once

#include <stdexcept>
#include <string>

namespace its {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Gamma-type function evaluated at a pole.
class PoleError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Invalid configuration object (tolerances, simulation settings, grids).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A simulated path never reached the requested level.
class HorizonError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical method failed its own consistency checks.
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace its
