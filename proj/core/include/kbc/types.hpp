#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kbc {

#ifdef KBC_SINGLE_PRECISION
using Real = float;
#else
using Real = double;
#endif

inline constexpr bool kRealIsDouble = sizeof(Real) == sizeof(double);

using Index = std::uint32_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text or binary file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A string did not resolve under a fixed vocabulary.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Mismatched sizes between stores, models, marginals or gradients.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite objective.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Failure of a numerical search (e.g. no exact fit at the requested rank).
class SearchError : public Error {
 public:
  using Error::Error;
};

}  // namespace kbc
