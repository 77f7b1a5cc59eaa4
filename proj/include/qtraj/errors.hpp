#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtraj {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or parameters (bad grid, negative mass, unknown config key, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Configuration document rejected; `key()` names the offending entry.
class ConfigError : public Error {
public:
  ConfigError(std::string key, const std::string &what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string &key() const noexcept { return key_; }

private:
  std::string key_;
};

/// A propagation or integration had to stop. Experiments surface these as exit code 3.
class NumericalAbort : public Error {
public:
  using Error::Error;
};

/// A value that must be finite was not.
class NonFiniteValue : public NumericalAbort {
public:
  NonFiniteValue(const std::string &context, std::size_t node)
      : NumericalAbort(context + ": non-finite value at node " + std::to_string(node)),
        node_(node) {}
  std::size_t node() const noexcept { return node_; }

private:
  std::size_t node_;
};

class CflViolation : public NumericalAbort {
public:
  using NumericalAbort::NumericalAbort;
};

/// Gradient blow-up in the hierarchy, most likely a focal point of the classical action.
class CausticSuspected : public NumericalAbort {
public:
  using NumericalAbort::NumericalAbort;
};

/// The Schrödinger oracle found amplitude at its box edges.
class EdgeAmplitudeError : public NumericalAbort {
public:
  using NumericalAbort::NumericalAbort;
};

} // namespace qtraj
