#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ersmeta {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line = 0,
             std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Turtle input that is well-formed but outside the supported subset
/// (collections, graphs, @base).
class UnsupportedConstructError : public ParseError {
public:
  using ParseError::ParseError;
};

/// A schema definition that parsed but violates its invariants. Carries every
/// violated invariant, not just the first one.
class ConsistencyError : public Error {
public:
  explicit ConsistencyError(std::vector<std::string> problems);

  const std::vector<std::string> &problems() const noexcept {
    return problems_;
  }

private:
  std::vector<std::string> problems_;
};

/// Record cannot be serialized against the schema (e.g. unknown element).
class SerializationError : public Error {
public:
  using Error::Error;
};

/// A document value does not fit the declared valueType.
class TypeMismatchError : public Error {
public:
  TypeMismatchError(std::string path, const std::string &what);
  const std::string &path() const noexcept { return path_; }

private:
  std::string path_;
};

/// Strict-mode parse met a key or predicate the schema does not declare.
class UnknownElementError : public Error {
public:
  explicit UnknownElementError(std::string element);
  const std::string &element() const noexcept { return element_; }

private:
  std::string element_;
};

/// Invalid crosswalk or extraction mapping configuration.
class ConfigurationError : public Error {
public:
  using Error::Error;
};

// Forge errors.

class UnsupportedForgeError : public Error {
public:
  using Error::Error;
};

class MalformedUrlError : public Error {
public:
  using Error::Error;
};

class NotFoundError : public Error {
public:
  using Error::Error;
};

class AuthError : public Error {
public:
  using Error::Error;
};

class RateLimitError : public Error {
public:
  RateLimitError(const std::string &what, long retry_after_seconds);
  /// Seconds to wait before retrying; -1 when the server gave no hint.
  long retry_after() const noexcept { return retry_after_; }

private:
  long retry_after_;
};

class TransportError : public Error {
public:
  using Error::Error;
};

} // namespace ersmeta
