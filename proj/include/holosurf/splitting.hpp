#pragma once

#include <string>
#include <utility>
#include <vector>

#include "holosurf/curvature.hpp"

// Decision procedure for the two ways a hypersurface with reduced holonomy
// can split.  A two-cluster principal-curvature profile either makes the
// surface locally a product of two curved factors of dimension >= 2
// (case a) or of an (n-1)-dimensional factor and a segment (case b).  The
// checks follow the derivation: cluster structure, the nu + Lambda Theta = 0
// relation, constancy over the sample set, vanishing cross-block curvature,
// and the frame-connection coefficients certifying the eigendistributions
// are parallel.

namespace holosurf {

struct Cluster {
  double value = 0.0;  // mean of the member eigenvalues
  int multiplicity = 0;
};

// Single-linkage clustering of the spectrum: adjacent eigenvalues of the
// (descending) list stay in one cluster while the gap is at most
// eps_cluster * (1 + max |lambda|).  Clusters come out in descending order.
std::vector<Cluster> cluster_profile(const FramedPoint& fp,
                                     double eps_cluster = 1e-4);

enum class SplitCase { a, b, none };

const char* split_case_name(SplitCase c);

struct SplitReport {
  SplitCase split_case = SplitCase::none;
  int k = 0;               // multiplicity of the Lambda cluster
  double Lambda = 0.0;
  double Theta = 0.0;
  double relation_residual = 0.0;     // max |nu + Lambda Theta| over samples
  double constancy_residual = 0.0;    // max drift of Lambda, Theta
  std::pair<double, double> factor_curvatures{0.0, 0.0};  // nu+L^2, nu+T^2
  double parallelism_residual = 0.0;  // worst off-block connection coefficient
  double cross_curvature_residual = 0.0;  // worst |R(X,Z)| over cross pairs
  double gamma_aan = 0.0;             // case b: common diagonal coefficient
  double en_lambda = 0.0;             // case b: derivative of Lambda along E_n
  std::string diagnostic;             // why the verdict fell out as it did
  std::vector<Vec> samples;           // parameter points actually certified
};

// Case a: two clusters of multiplicities k and n-k, both >= 2.  Verifies
// |nu + Lambda Theta| <= tol and constancy of Lambda, Theta across the
// sample points, predicts the factor curvatures, and (when a chart is
// supplied) checks cross-block curvature and distribution parallelism with
// step h.  Throws StructuralError when the points disagree about the
// cluster profile or it is not the (k, n-k) shape this case needs.
//
// The chart parameter is not in the narrowest reading of the interface, but
// the parallelism coefficients are frame derivatives and cannot be produced
// from isolated FramedPoints; passing nullptr skips those checks (used by
// threshold-logic tests on synthetic spectra).
SplitReport check_case_a(const std::vector<FramedPoint>& points, double nu,
                         double tol, const ImmersionChart* chart = nullptr,
                         double h = 1e-3, double eps_cluster = 1e-4);

// Case b: clusters of multiplicities (n-1, 1).  Verifies the relation and
// constancy as above, that Lambda does not vary along the big cluster
// (E_a(Lambda) = 0), and estimates the common coefficient Gamma_aan; the
// case is confirmed only when it vanishes within tol, otherwise the report
// explains that full SO(n) holonomy is expected.  Needs the chart for every
// derivative estimate; nullptr is tolerated only for inputs rejected before
// that stage.
SplitReport check_case_b(const std::vector<FramedPoint>& points, double nu,
                         double tol, const ImmersionChart* chart, double h,
                         double eps_cluster = 1e-4);

struct FlatnessReport {
  bool flat = false;
  std::string diagnostic;
};

// True iff every |nu + lambda_i lambda_j|, i != j, is at most tol.  A flat
// answer with nu > 0 is numerically impossible for a genuine hypersurface,
// and the diagnostic says so.
FlatnessReport flatness_check(const FramedPoint& fp, double nu, double tol);

}  // namespace holosurf
