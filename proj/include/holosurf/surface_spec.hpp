#pragma once

#include <string>
#include <vector>

#include "holosurf/catalog.hpp"
#include "holosurf/expr.hpp"

// Text format for surfaces: whitespace-separated key=value tokens, `#`
// comments, and user expression charts under an `expr:` block.  Inside the
// block each line holds assignments `f<i>=<expression>` separated by `;`,
// one per embedding coordinate.  Syntax problems raise SpecParseError with
// line and column; semantic problems raise ValidationError naming the key.

namespace holosurf {

struct ExprChartSpec {
  int n = 0;
  double nu = 0.0;
  std::vector<Expr> components;  // f1..fm, m the embedding dimension
  std::vector<double> lo, hi;    // per-axis or single broadcast value
};

struct SurfaceSpec {
  bool is_family = true;
  FamilySpec family;
  ExprChartSpec expr;
};

SurfaceSpec parse_surface_spec(const std::string& text);

// Canonical spec text that parses back to the same surface; doubles carry
// 17 significant digits so the round trip is bit-exact.
std::string surface_spec_text(const SurfaceSpec& spec);

// Family specs go through the catalog; expression charts are compiled and
// validated (component count must match the embedding dimension, parameter
// indices must reach exactly n) and carry no expectation.
BuiltChart build_surface(const SurfaceSpec& spec, bool smoke = false);

}  // namespace holosurf
