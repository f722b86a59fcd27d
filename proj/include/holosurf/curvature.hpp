#pragma once

#include <functional>
#include <vector>

#include "holosurf/modelspace.hpp"
#include "holosurf/smallmat.hpp"

// Induced geometry of a chart at one parameter point: metric, Christoffel
// symbols, shape operator with its principal curvatures, and the curvature
// operator R(X,Y) = nu X^Y + AX^AY.  Also the finite-difference residuals
// (Codazzi, second Bianchi, intrinsic sectional cross-check) that certify a
// chart really is a hypersurface of the model and not a typo.
//
// Everything here is recomputed per query; no caching, no shared state.

namespace holosurf {

struct FramedPoint {
  Vec u;
  double nu = 0.0;
  Mat g;                      // metric on coordinates, g(d_i f, d_j f)
  std::vector<double> gamma;  // Christoffels, symmetric in the lower pair
  Mat A_coord;                // shape operator acting on coordinate components
  Mat frame;                  // columns: g-orthonormal tangent frame
  Mat A_frame;                // frame expression of A, symmetric
  Vec lambda;                 // principal curvatures, descending
  Mat eig;                    // columns: eigenvectors of A_frame

  int n() const { return static_cast<int>(g.rows()); }
  double christoffel(int k, int i, int j) const;
  // Orthonormal eigenframe of A in coordinate components, frame * eig.
  Mat eigenframe() const;
};

// Metric from the jet's first derivatives under the model form, Christoffels
// from central differences of the metric, shape operator from <d2, xi>.
// Throws InvalidChartError when the induced metric is not positive definite.
FramedPoint framed_point(const ImmersionChart& chart, const Vec& u, double h,
                         int normal_sign = +1);

// Coordinate connection coefficients alone, cheaper than a full
// framed_point when only transport is needed.  Packing matches
// FramedPoint::christoffel: Gamma^k_{ij} at ((k n + i) n + j).
std::vector<double> christoffel_symbols(const ImmersionChart& chart,
                                        const Vec& u, double h);

struct CurvatureOp {
  double nu = 0.0;
  Mat A_frame;
};

// R(x, y) for vectors given in an orthonormal frame in which A is A_frame.
SkewEndo curvature_action(const CurvatureOp& op, const Vec& x, const Vec& y);

// R(e_i, e_j) = (nu + lambda_i lambda_j) e_i ^ e_j in the eigenframe of A.
// i and j are eigenframe indices (0-based, matching fp.lambda); i == j is a
// contract violation.
SkewEndo curvature_endo(const FramedPoint& fp, int i, int j);

// Largest |nu + lambda_i lambda_j| over pairs, the natural size of R when
// identities are checked relative to it.
double curvature_scale(const FramedPoint& fp);

// Components of nabla R along one eigenframe vector, expressed in the
// eigenframe at the base point.  Values for i > j mirror i < j with a sign.
struct CurvatureDerivative {
  int n = 0;
  std::vector<Mat> comp;  // pairs i < j, packed row-wise

  SkewEndo at(int i, int j) const;
};

// Derivative of R(E_i, E_j) along E_V: the stencil points carry a copy of
// the base eigenframe transported parallelly to first order, so ordinary
// differences of the frame components give covariant ones.  Keeps the
// required jet order at 2.
CurvatureDerivative nabla_R(const ImmersionChart& chart, const Vec& u,
                            double h, int V);

// max over frame pairs (i, j) of |(nabla_{E_i} A)E_j - (nabla_{E_j} A)E_i|,
// from differences of A_frame corrected by the frame connection.  Zero up
// to discretization on a genuine hypersurface.  `tamper` mutates every
// sampled A_frame and exists so tests can confirm a corrupted shape
// operator is actually caught.
double codazzi_residual(
    const ImmersionChart& chart, const Vec& u, double h,
    const std::function<void(const Vec&, Mat&)>& tamper = {});

// Sectional curvature of the plane spanned by eigenframe vectors i, j,
// computed intrinsically from the Christoffels and their differences.  Has
// to agree with nu + lambda_i lambda_j; the comparison is the strongest
// whole-pipeline sanity check we have.
double sectional_curvature_intrinsic(const ImmersionChart& chart, const Vec& u,
                                     double h, int i, int j);

// max over pairs of |sectional_intrinsic(i,j) - (nu + lambda_i lambda_j)|.
double gauss_crosscheck_residual(const ImmersionChart& chart, const Vec& u,
                                 double h);

// max over frame triples of |cyclic sum of (nabla_a R)(E_b, E_c)|.
double second_bianchi_residual(const ImmersionChart& chart, const Vec& u,
                               double h);

}  // namespace holosurf
