#ifndef SEQAR_ERRORS_HPP
#define SEQAR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqar {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The polynomial root finder failed to converge.
class RootFinderError : public Error {
 public:
  using Error::Error;
};

/// Repeated unit roots or more than one complex unit pair.
class UnsupportedBoundary : public Error {
 public:
  using Error::Error;
};

/// A stable parameter was required.
class NotStable : public Error {
 public:
  using Error::Error;
};

/// A simulated value became non-finite.
class OverflowDetected : public Error {
 public:
  OverflowDetected(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Malformed CSV input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace seqar

#endif  // SEQAR_ERRORS_HPP
