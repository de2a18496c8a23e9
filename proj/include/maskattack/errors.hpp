#pragma once

#include <stdexcept>
#include <string>

namespace maskattack {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or unparseable file contents.
class FormatError : public Error {
public:
  using Error::Error;
};

// Valid container but a codec we do not handle.
class UnsupportedCodecError : public Error {
public:
  using Error::Error;
};

// Input sample rate differs from the pipeline rate and resampling was not requested.
class RateMismatchError : public Error {
public:
  using Error::Error;
};

class WriteError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class TooShortError : public Error {
public:
  using Error::Error;
};

class SelectionError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

// Empty input where a statistic is undefined.
class UndefinedInputError : public Error {
public:
  using Error::Error;
};

// Transport, timeout or protocol failure talking to a transcriber.
class TranscriberError : public Error {
public:
  using Error::Error;
};

}  // namespace maskattack
