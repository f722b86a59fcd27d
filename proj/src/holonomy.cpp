#include "holosurf/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace holosurf {

namespace {

constexpr double kDropFactorOrder0 = 1e-6;
constexpr double kDropFactorOrder1 = 1e-4;

// Step for the connection coefficients along a transport path; they use
// first differences only, so this balances truncation against roundoff.
constexpr double kTransportStep = 1e-4;

// Transport around a positively oriented rectangle (first i, then j) comes
// back rotated by exp(-eps^2 R(e_i, e_j)) + O(eps^3) under this library's
// curvature sign; measured once on a round sphere and frozen.
constexpr double kLoopSign = -1.0;

std::string format_value(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// |nu| + ||A||_F^2, the magnitude scale of every curvature generator.
double generator_scale(const FramedPoint& fp, double nu) {
  double a2 = 0.0;
  for (std::size_t q = 0; q < fp.lambda.size(); ++q)
    a2 += fp.lambda[q] * fp.lambda[q];
  return std::abs(nu) + a2;
}

int product_dim(int k, int n) {
  return k * (k - 1) / 2 + (n - k) * (n - k - 1) / 2;
}

void assert_bookkeeping(const GroupVerdict& v, int n) {
  bool ok = true;
  switch (v.kind) {
    case VerdictKind::FULL_SO_N:
      ok = v.dim_found == n * (n - 1) / 2;
      break;
    case VerdictKind::PRODUCT_SO_K_SO_NK:
      ok = v.k > 1 && v.k < n - 1 && v.dim_found == product_dim(v.k, n);
      break;
    case VerdictKind::SO_N_MINUS_1:
      ok = v.k == n - 1 && v.dim_found == (n - 1) * (n - 2) / 2;
      break;
    case VerdictKind::TRIVIAL:
      ok = v.dim_found == 0;
      break;
    case VerdictKind::UNDETERMINED:
      break;
  }
  if (!ok) throw ContractViolation("group verdict bookkeeping is inconsistent");
}

}  // namespace

std::vector<SkewEndo> generators_at(const FramedPoint& fp, double nu,
                                    int order, const ImmersionChart* chart,
                                    const Vec& u, double h) {
  if (order != 0 && order != 1)
    throw ContractViolation("generator order must be 0 or 1");
  const int n = fp.n();
  const double scale = generator_scale(fp, nu);
  std::vector<SkewEndo> gens;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      SkewEndo s = curvature_endo(fp, i, j);
      if (skew_norm(s) > kDropFactorOrder0 * scale)
        gens.push_back(std::move(s));
    }
  if (order == 1) {
    if (chart == nullptr)
      throw ContractViolation("order 1 generators need the chart");
    for (int V = 0; V < n; ++V) {
      const CurvatureDerivative d = nabla_R(*chart, u, h, V);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          SkewEndo s = d.at(i, j);
          if (skew_norm(s) > kDropFactorOrder1 * scale)
            gens.push_back(std::move(s));
        }
    }
  }
  return gens;
}

HolonomyAlgebra holonomy_algebra(const std::vector<SkewEndo>& generators,
                                 int n, double tol, int included_orders) {
  if (n < 1) throw ContractViolation("holonomy_algebra needs n >= 1");
  for (const auto& g : generators)
    if (static_cast<int>(g.dim()) != n)
      throw ContractViolation("generator dimension disagrees with n");
  HolonomyAlgebra out;
  out.included_orders = included_orders;
  if (!generators.empty()) out.basis = closure_under_brackets(generators, tol);
  out.dim = static_cast<int>(out.basis.dim());
  out.blocks = invariant_blocks(out.basis, static_cast<std::size_t>(n), tol);
  if (out.dim > n * (n - 1) / 2)
    throw ContractViolation("holonomy dimension exceeds dim so(n)");
  return out;
}

SkewEndo loop_holonomy(const ImmersionChart& chart, const Vec& u, int i,
                       int j, double eps, int steps) {
  const int n = chart.n();
  if (steps < 8)
    throw ContractViolation("loop transport needs at least 8 steps per edge");
  if (i < 0 || j < 0 || i >= n || j >= n || i == j)
    throw ContractViolation("loop directions must be distinct frame indices");
  if (!(eps > 0.0)) throw ContractViolation("loop size must be positive");

  const FramedPoint fp = framed_point(chart, u, kTransportStep);
  const Mat W0 = fp.eigenframe();
  const Vec wi = W0.col(static_cast<std::size_t>(i));
  const Vec wj = W0.col(static_cast<std::size_t>(j));

  const Vec c1 = u + eps * wi;
  const Vec c2 = c1 + eps * wj;
  const Vec c3 = u + eps * wj;
  for (const Vec* c : {&u, &c1, &c2, &c3})
    if (!chart.domain().contains(*c, 2.0 * kTransportStep))
      throw StencilDomainError(
          "transport rectangle leaves the chart domain on " + chart.label());

  // velocity-contracted connection, C(k, l) = sum_m v_m Gamma^k_{ml}
  auto cmat = [&](const Vec& x, const Vec& v) {
    const std::vector<double> g = christoffel_symbols(chart, x, kTransportStep);
    Mat c(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m)
          acc += v[static_cast<std::size_t>(m)] *
                 g[static_cast<std::size_t>((k * n + m) * n + l)];
        c(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) = acc;
      }
    return c;
  };

  Mat W = W0;
  auto edge = [&](const Vec& x0, const Vec& v) {
    const double dt = 1.0 / steps;
    for (int s = 0; s < steps; ++s) {
      const Vec xa = x0 + (s * dt) * v;
      const Vec xm = x0 + ((s + 0.5) * dt) * v;
      const Vec xb = x0 + ((s + 1.0) * dt) * v;
      const Mat ca = cmat(xa, v), cm = cmat(xm, v), cb = cmat(xb, v);
      const Mat k1 = -1.0 * (ca * W);
      const Mat k2 = -1.0 * (cm * (W + (0.5 * dt) * k1));
      const Mat k3 = -1.0 * (cm * (W + (0.5 * dt) * k2));
      const Mat k4 = -1.0 * (cb * (W + dt * k3));
      W += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  };
  edge(u, eps * wi);
  edge(c1, eps * wj);
  edge(c2, -eps * wi);
  edge(c3, -eps * wj);

  // start-to-end map in frame components; the loop is closed, so the base
  // metric applies
  const Mat q = transpose(W0) * (fp.g * W);
  const double drift =
      max_abs(transpose(q) * q - Mat::identity(static_cast<std::size_t>(n)));
  if (drift > 1e-5)
    throw IntegrationFailure("transported frame lost orthogonality, drift " +
                             format_value("%.3g", drift));

  Mat log_m = rotation_log(polar_factor(q)).mat();
  log_m *= kLoopSign / (eps * eps);
  return SkewEndo(std::move(log_m));
}

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::FULL_SO_N:
      return "FULL_SO_N";
    case VerdictKind::PRODUCT_SO_K_SO_NK:
      return "PRODUCT_SO_K_SO_NK";
    case VerdictKind::SO_N_MINUS_1:
      return "SO_N_MINUS_1";
    case VerdictKind::TRIVIAL:
      return "TRIVIAL";
    case VerdictKind::UNDETERMINED:
      return "UNDETERMINED";
  }
  return "UNDETERMINED";
}

GroupVerdict name_group(const HolonomyAlgebra& alg,
                        const std::vector<Cluster>& clusters, int n,
                        double nu) {
  if (n < 2) throw ContractViolation("name_group needs n >= 2");
  GroupVerdict v;
  v.clusters = clusters;
  v.dim_found = alg.dim;
  const int full = n * (n - 1) / 2;
  v.dim_expected = full;

  std::vector<int> bs;
  bs.reserve(alg.blocks.size());
  for (const auto& b : alg.blocks) bs.push_back(static_cast<int>(b.size()));
  std::sort(bs.begin(), bs.end(), std::greater<int>());

  if (alg.dim == full) {
    v.kind = VerdictKind::FULL_SO_N;
    v.diagnostic = "generators span all of so(n)";
  } else if (alg.dim == 0) {
    if (nu < 0.0) {
      v.kind = VerdictKind::TRIVIAL;
      v.dim_expected = 0;
      v.diagnostic = "no curvature generators survive; transport is trivial";
    } else if (nu > 0.0) {
      v.diagnostic =
          "zero-dimensional holonomy contradicts the positive model "
          "curvature; the input data cannot describe a hypersurface";
    } else {
      v.diagnostic =
          "zero-dimensional holonomy in a flat model is outside the "
          "curved-model classification";
    }
  } else if (bs.size() == 2) {
    if (clusters.size() == 2 && bs[1] >= 2) {
      const int k = clusters[0].multiplicity;
      const double big_v = clusters[0].value, small_v = clusters[1].value;
      const double amax = std::max(std::abs(big_v), std::abs(small_v));
      const bool sizes_match =
          bs[0] == std::max(k, n - k) && bs[1] == std::min(k, n - k);
      const bool relation = std::abs(nu + big_v * small_v) <=
                            1e-3 * (std::abs(nu) + amax * amax);
      if (sizes_match && k > 1 && k < n - 1 && alg.dim == product_dim(k, n) &&
          relation) {
        v.kind = VerdictKind::PRODUCT_SO_K_SO_NK;
        v.k = k;
        v.dim_expected = product_dim(k, n);
        v.diagnostic = "two invariant blocks rotating independently";
      }
    }
    if (v.kind == VerdictKind::UNDETERMINED && bs[0] == n - 1 && bs[1] == 1 &&
        alg.dim == (n - 1) * (n - 2) / 2) {
      v.kind = VerdictKind::SO_N_MINUS_1;
      v.k = n - 1;
      v.dim_expected = (n - 1) * (n - 2) / 2;
      v.diagnostic = "one fixed direction, full rotations transverse to it";
    }
  }

  if (v.kind == VerdictKind::UNDETERMINED && v.diagnostic.empty()) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "dimension %d with %zu invariant blocks matches no "
                  "classified case",
                  alg.dim, alg.blocks.size());
    v.diagnostic = buf;
  }
  assert_bookkeeping(v, n);
  return v;
}

}  // namespace holosurf
