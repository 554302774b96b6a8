#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbmo {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A scalar argument violated its precondition (gamma outside (0,1), etc).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// A run configuration is unusable (empty ladder, empty family, ...).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A box intersected with the grid holds too few samples for an average.
class ResolutionError : public Error {
public:
  ResolutionError(const std::string& what, std::size_t count)
      : Error(what), sample_count(count) {}
  std::size_t sample_count;
};

/// A closed-form evaluator produced a non-finite value.
class SamplingError : public Error {
public:
  using Error::Error;
};

/// Two sets violate the required temporal order.
class OrderError : public Error {
public:
  using Error::Error;
};

/// A requested object does not fit inside the bounded domain.
class DomainError : public Error {
public:
  using Error::Error;
};

} // namespace pbmo
