#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace leias {

// Base of every error the library raises. CLI exit codes are chosen by type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ThresholdOrderError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyRouteError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NonIntegralDeadlineError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NotImplicatedError : public Error {
 public:
  using Error::Error;
};

class ResponseWithoutAlertError : public Error {
 public:
  using Error::Error;
};

class MalformedTraceError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::int64_t tick)
      : Error(what), tick_(tick) {}
  // -1 when the header line differs.
  std::int64_t tick() const noexcept { return tick_; }

 private:
  std::int64_t tick_;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class PortBindError : public Error {
 public:
  using Error::Error;
};

}  // namespace leias
