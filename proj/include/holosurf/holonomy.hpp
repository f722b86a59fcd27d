#pragma once

#include <string>
#include <vector>

#include "holosurf/curvature.hpp"
#include "holosurf/splitting.hpp"

// Infinitesimal holonomy at a point.  Curvature endomorphisms (and at order
// 1 their first covariant derivatives) generate a Lie algebra; closing it
// under brackets and decomposing into invariant blocks is enough to name
// the holonomy group in every case the classification admits.  A loop
// transport estimator validates the generators independently of the
// algebraic route.

namespace holosurf {

struct HolonomyAlgebra {
  SpanBasis basis;                       // orthonormal under skew_inner
  int dim = 0;
  std::vector<std::vector<int>> blocks;  // partition of {0..n-1}
  int included_orders = 0;               // 0: R only; 1: R and nabla R
};

// Generators R(e_i, e_j), i < j, in the eigenframe of fp; entries with norm
// at most 1e-6 * (|nu| + ||A||_F^2) are dropped as zero.  order 1 appends
// the components (nabla_{e_V} R)(e_i, e_j) for every direction V, with the
// drop factor widened to 1e-4 to sit above the noise floor of the nested
// difference stencil.  order 1 needs the chart and propagates its stencil
// errors.
std::vector<SkewEndo> generators_at(const FramedPoint& fp, double nu,
                                    int order, const ImmersionChart* chart,
                                    const Vec& u, double h);

// Bracket closure of the generators followed by the finest invariant-block
// decomposition, both at tolerance tol.  n is the frame dimension (needed
// when every generator was dropped); a nonempty generator list must agree
// with it.
HolonomyAlgebra holonomy_algebra(const std::vector<SkewEndo>& generators,
                                 int n, double tol, int included_orders = 0);

// Parallel transport of the eigenframe around the coordinate rectangle
// spanned by eps times eigenframe directions i and j, one classical
// 4th-order step per subdivision, `steps` per edge.  Returns rotation_log
// of the start-to-end frame map scaled by 1/eps^2, an O(eps) approximation
// of curvature_endo(fp, i, j); the overall sign was calibrated once on a
// round sphere and is frozen here.  Throws ContractViolation for steps < 8
// or i == j, IntegrationFailure when the transported frame drifts from
// orthogonal by more than 1e-5, and stencil errors when the rectangle
// leaves the domain.
SkewEndo loop_holonomy(const ImmersionChart& chart, const Vec& u, int i,
                       int j, double eps, int steps);

enum class VerdictKind {
  FULL_SO_N,
  PRODUCT_SO_K_SO_NK,
  SO_N_MINUS_1,
  TRIVIAL,
  UNDETERMINED,
};

const char* verdict_name(VerdictKind k);

struct GroupVerdict {
  VerdictKind kind = VerdictKind::UNDETERMINED;
  int k = 0;  // PRODUCT: first-cluster multiplicity; SO_N_MINUS_1: n-1
  std::vector<Cluster> clusters;  // the spectrum the verdict was judged on
  int dim_found = 0;
  int dim_expected = 0;  // what the named kind requires; full for UNDETERMINED
  std::string diagnostic;
};

// Decision tree, never guessing:
//   dim n(n-1)/2                                    -> FULL_SO_N
//   dim 0, nu < 0                                   -> TRIVIAL
//   dim 0, nu >= 0                                  -> UNDETERMINED; for
//     nu > 0 a flat point is impossible for genuine hypersurface data and
//     the diagnostic says so, for nu = 0 the verdict is simply withheld
//   blocks k, n-k with 1 < k < n-1, matching dims,
//     matching cluster multiplicities, nu + Lambda Theta ~ 0
//                                                   -> PRODUCT_SO_K_SO_NK
//   blocks n-1, 1 with dim (n-1)(n-2)/2             -> SO_N_MINUS_1
//   anything else                                   -> UNDETERMINED
// The dimensional bookkeeping of the result is asserted before returning.
GroupVerdict name_group(const HolonomyAlgebra& alg,
                        const std::vector<Cluster>& clusters, int n,
                        double nu);

}  // namespace holosurf
