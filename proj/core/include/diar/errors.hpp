#pragma once

#include <stdexcept>
#include <string>

namespace diar {

// Base class for all diarkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (RTTM lines, posterior files, configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A value or argument violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem or stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// An embedding / posterior / pair-score provider failed to serve a request.
class ProviderError : public Error {
 public:
  using Error::Error;
};

// Pipeline configuration is unusable (maps to exit code 2 in the CLI).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace diar
