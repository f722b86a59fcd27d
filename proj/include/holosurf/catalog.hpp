#pragma once

#include <string>
#include <utility>
#include <vector>

#include "holosurf/holonomy.hpp"
#include "holosurf/modelspace.hpp"
#include "holosurf/splitting.hpp"

// Closed-form chart families with machine-checkable expectations.  Each
// build hands back the immersion chart together with the verdict, spectrum
// and factor curvatures its analytic shape operator dictates, so tests and
// the CLI can hold the whole pipeline against ground truth.

namespace holosurf {

enum class Family {
  clifford_product,
  geodesic_sphere_S,
  geodesic_sphere_H,
  horosphere,
  equidistant,
  totally_geodesic,
  graph_generic,
};

const char* family_name(Family f);

// Inverse of family_name; throws ValidationError for unknown names.
Family family_from_name(const std::string& name);

const std::vector<Family>& all_families();

struct FamilySpec {
  Family family = Family::geodesic_sphere_S;
  int n = 0;
  double nu = 0.0;
  int k = 0;         // clifford_product: dimension of the first factor
  double r = 0.0;    // clifford_product: radius of the first factor
  double rho = 0.0;  // geodesic spheres: geodesic radius
  double t = 0.0;    // equidistant: distance from the totally geodesic leaf
  double amplitude = 0.2;  // graph_generic: profile wobble size
  double frequency = 1.0;  // graph_generic: profile wobble frequency
};

struct ExpectedOutcome {
  VerdictKind kind = VerdictKind::UNDETERMINED;
  int k = 0;                      // for PRODUCT and SO_N_MINUS_1 verdicts
  std::vector<Cluster> clusters;  // closed form; empty when it varies
  std::pair<double, double> factor_curvatures{0.0, 0.0};
  bool has_factor_curvatures = false;
  std::string note;  // one line on where the expectation comes from
};

struct BuiltChart {
  ImmersionChart chart;
  ExpectedOutcome expected;
};

// Validates the spec and returns the chart plus its expectation; invalid
// parameters raise ValidationError naming the violated range.  smoke
// relaxes n >= 3 to n >= 2 and withholds the expectation, matching how
// verdicts are treated below the classification's dimension floor.
BuiltChart build(const FamilySpec& spec, bool smoke = false);

}  // namespace holosurf
