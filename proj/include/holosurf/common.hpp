#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace holosurf {

inline constexpr const char* kToolVersion = "0.1.0";

// Every failure mode carries a stable machine-readable code so the CLI can
// report it without string-matching what() text.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Caller handed us arguments that break a documented precondition.
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what)
      : Error("contract-violation", what) {}
};

// A finite-difference stencil would leave the chart's parameter domain.
class StencilDomainError : public Error {
 public:
  explicit StencilDomainError(const std::string& what)
      : Error("domain", what) {}
};

// The chart fails its own obligations: model constraint violated or the
// differential is rank deficient at a queried point.
class InvalidChartError : public Error {
 public:
  explicit InvalidChartError(const std::string& what)
      : Error("invalid-chart", what) {}
};

// Numerical transport drifted too far from the orthogonal group.
class IntegrationFailure : public Error {
 public:
  explicit IntegrationFailure(const std::string& what)
      : Error("integration-failure", what) {}
};

// Sampled data does not have the shape a check requires (e.g. cluster
// multiplicities differ between sample points).
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what)
      : Error("structural", what) {}
};

// User-supplied configuration is inconsistent (bad parameter ranges etc.).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error("validation", what) {}
};

// Surface spec text could not be parsed; carries the offending position.
class SpecParseError : public Error {
 public:
  SpecParseError(const std::string& what, int line, int col)
      : Error("parse", what), line_(line), col_(col) {}
  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace holosurf
