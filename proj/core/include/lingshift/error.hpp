#pragma once

#include <stdexcept>
#include <string>

namespace lingshift {

// Base for every error raised by the library. Subclasses let callers map
// failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable file or failed write.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input text; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

// A precondition on arguments was violated (bad k, empty input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Lookup of a word that is not present where it is required.
class UnknownWord : public Error {
 public:
  using Error::Error;
};

// SGD produced a non-finite loss or gradient.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Unregularized normal equations are singular.
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace lingshift
