#ifndef GRAPHVORTEX_ERROR_HPP
#define GRAPHVORTEX_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graphvortex {

enum class ErrorKind {
  EmptyGraph,
  DisconnectedGraph,
  NonPositiveMeasure,
  NonPositiveWeight,
  SelfLoop,
  DuplicateEdge,
  DuplicateVertex,
  UnknownVertex,
  GraphMismatch,
  NonFiniteValue,
  InvalidExponent,
  InvalidSettings,
  IncompatibleSource,
  NonPositiveShift,
  SolverDivergence,
  DuplicateVortex,
  NonPositiveMultiplicity,
  ThresholdViolated,
  MaxItersExceeded,
  InvalidSpec,
  ConnectivityRetriesExhausted,
  ParseError,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library. `line()` is the 1-based source line
// when the error was detected while reading a text file, 0 otherwise.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

private:
  ErrorKind kind_;
  std::size_t line_;
};

} // namespace graphvortex

#endif
