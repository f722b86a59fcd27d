#pragma once

#include <functional>
#include <string>
#include <vector>

#include "holosurf/common.hpp"
#include "holosurf/smallmat.hpp"

// Constant-curvature ambient models and immersed hypersurface charts.
// A chart maps an n-dimensional parameter box into the flat embedding space
// of the model: R^(n+2) for the sphere (nu > 0) and the hyperboloid
// (nu < 0, Minkowski inner product with one minus sign first), R^(n+1) for
// nu = 0.  Points of the curved models satisfy <x, x> = 1/nu.

namespace holosurf {

struct AmbientModel {
  double nu = 0.0;
  int ambient_dim = 0;    // dimension of the model space itself, n + 1
  int embedding_dim = 0;  // flat coordinates used to represent it
  std::vector<double> signature;

  static AmbientModel make(double nu, int n);

  double form(const Vec& x, const Vec& y) const;
  // |<x,x> - 1/nu|, or 0 for the flat model which has no constraint.
  double constraint_residual(const Vec& x) const;
};

struct Box {
  std::vector<double> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double max_extent() const;
  bool contains(const Vec& u, double margin = 0.0) const;
};

class ImmersionChart {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;

  ImmersionChart(int n, AmbientModel model, Box domain, EvalFn eval,
                 std::string label = "");

  int n() const { return n_; }
  const AmbientModel& model() const { return model_; }
  const Box& domain() const { return domain_; }
  const std::string& label() const { return label_; }

  Vec operator()(const Vec& u) const;

  // Step used when the caller does not pick one: 1e-4 of the widest
  // domain axis.
  double default_step() const { return 1e-4 * domain_.max_extent(); }

 private:
  int n_;
  AmbientModel model_;
  Box domain_;
  EvalFn eval_;
  std::string label_;
};

struct ChartJet {
  Vec point;
  std::vector<Vec> d1;  // n embedding-space vectors
  // Second derivatives for i <= j, packed row-wise; d2(i,j) resolves either
  // order.
  std::vector<Vec> d2_packed;
  double step = 0.0;

  const Vec& d2(int i, int j) const;
};

// Central differences of order h^2; the mixed terms use the four-corner
// stencil.  Throws StencilDomainError when a sample would leave the domain
// and InvalidChartError when the model constraint fails beyond 1e-8 at any
// stencil point or the first derivatives are rank deficient.
ChartJet jet(const ImmersionChart& chart, const Vec& u, double h);

struct TangentNormalFrame {
  std::vector<Vec> tangent;  // the d1 vectors, unchanged
  Vec xi;                    // unit normal within the model
};

// xi is the unit vector orthogonal (under the model form) to the position
// vector (when nu != 0) and all first derivatives, oriented so that
// (position when nu != 0, d1..., xi) is a positively oriented basis of the
// embedding space.  normal_sign = -1 flips it, which exists so invariance
// suites can exercise both orientations.
TangentNormalFrame tangent_normal_frame(const ImmersionChart& chart,
                                        const ChartJet& jet,
                                        int normal_sign = +1);

}  // namespace holosurf
