#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holosurf/report.hpp"
#include "holosurf/surface_spec.hpp"

// Runs the whole chain (chart, framed points, spectrum clustering, holonomy
// generators, verdict, splitting checks) over a set of sample points and
// assembles the versioned report.  Reports carry the full configuration;
// feeding the echo back reproduces the run bit-exactly.

namespace holosurf {

struct RunConfig {
  SurfaceSpec surface;
  std::vector<std::vector<double>> points;  // explicit sample points
  std::vector<int> grid;    // per-axis cell counts, single value broadcasts
  int point_count = 5;      // random samples when neither points nor grid
  double h = 1e-4;
  int order = 0;            // generator order: curvature only, or + nabla R
  double eps_cluster = 1e-4;
  double tol = 0.0;         // relation / residual tolerance; 0 = scaled auto
  double tol_gen = 0.0;     // algebra span tolerance; 0 = default
  std::string output = "text";
  std::uint64_t seed = 1;
  bool smoke = false;       // allows n = 2; its verdicts become UNDETERMINED
};

struct RunResult {
  Json report;
  int exit_code = 0;  // 0 definite / in tolerance, 2 undetermined / exceeded
};

// The config echo embedded in every report.
Json config_json(const RunConfig& config);

// Classification: per-point verdicts, consensus (UNDETERMINED unless all
// points agree), splitting verification of product and fixed-vector
// verdicts, flatness check of trivial ones.
RunResult run_classify(const RunConfig& config);

// Identity residuals (Codazzi, second Bianchi, Gauss cross-check, loop
// transport vs curvature) against their scaled bounds at every point.
RunResult run_verify(const RunConfig& config);

}  // namespace holosurf
