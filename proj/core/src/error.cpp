#include "graphvortex/error.hpp"

namespace graphvortex {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::EmptyGraph: return "EmptyGraph";
  case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
  case ErrorKind::NonPositiveMeasure: return "NonPositiveMeasure";
  case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
  case ErrorKind::SelfLoop: return "SelfLoop";
  case ErrorKind::DuplicateEdge: return "DuplicateEdge";
  case ErrorKind::DuplicateVertex: return "DuplicateVertex";
  case ErrorKind::UnknownVertex: return "UnknownVertex";
  case ErrorKind::GraphMismatch: return "GraphMismatch";
  case ErrorKind::NonFiniteValue: return "NonFiniteValue";
  case ErrorKind::InvalidExponent: return "InvalidExponent";
  case ErrorKind::InvalidSettings: return "InvalidSettings";
  case ErrorKind::IncompatibleSource: return "IncompatibleSource";
  case ErrorKind::NonPositiveShift: return "NonPositiveShift";
  case ErrorKind::SolverDivergence: return "SolverDivergence";
  case ErrorKind::DuplicateVortex: return "DuplicateVortex";
  case ErrorKind::NonPositiveMultiplicity: return "NonPositiveMultiplicity";
  case ErrorKind::ThresholdViolated: return "ThresholdViolated";
  case ErrorKind::MaxItersExceeded: return "MaxItersExceeded";
  case ErrorKind::InvalidSpec: return "InvalidSpec";
  case ErrorKind::ConnectivityRetriesExhausted: return "ConnectivityRetriesExhausted";
  case ErrorKind::ParseError: return "ParseError";
  case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message, std::size_t line) {
  std::string out(to_string(kind));
  if (line != 0)
    out += " at line " + std::to_string(line);
  if (!message.empty())
    out += ": " + message;
  return out;
}

} // namespace

Error::Error(ErrorKind kind, const std::string& message, std::size_t line)
    : std::runtime_error(decorate(kind, message, line)), kind_(kind), line_(line) {}

} // namespace graphvortex
