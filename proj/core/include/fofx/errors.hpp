#pragma once

#include <stdexcept>
#include <string>

namespace fofx {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A value lies outside its mathematical domain (e.g. z outside [-1, 1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed text or binary mesh input. `line()` is 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed FOF container.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration or command-line usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace fofx
