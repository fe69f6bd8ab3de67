#pragma once

#include <stdexcept>
#include <string>

namespace dgi {

// Text input could not be parsed. Positions are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(message), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// The caller violated a documented precondition (unknown vertex, incomplete
// edge mapping, malformed isomorphism, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The glued complex is not closed along its edges (condition (a) fails), so
// surface quantities such as the Euler characteristic are undefined.
class NonSurfaceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured resource cap (edge count, candidate budget, wall clock) was hit
// before the computation finished.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& cap, const std::string& detail)
      : std::runtime_error("resource cap '" + cap + "' exceeded: " + detail),
        cap_(cap) {}

  const std::string& cap() const { return cap_; }

 private:
  std::string cap_;
};

}  // namespace dgi
