#include "holosurf/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace holosurf {

namespace {

std::vector<std::pair<int, int>> cluster_ranges(const Vec& lambda,
                                                double eps_cluster) {
  const int n = static_cast<int>(lambda.size());
  double amax = 0.0;
  for (int i = 0; i < n; ++i)
    amax = std::max(amax, std::abs(lambda[static_cast<std::size_t>(i)]));
  const double gap = eps_cluster * (1.0 + amax);
  std::vector<std::pair<int, int>> out;
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || std::abs(lambda[static_cast<std::size_t>(i - 1)] -
                           lambda[static_cast<std::size_t>(i)]) > gap) {
      out.emplace_back(start, i);
      start = i;
    }
  }
  return out;
}

double cluster_mean(const Vec& lambda, std::pair<int, int> range) {
  double m = 0.0;
  for (int i = range.first; i < range.second; ++i)
    m += lambda[static_cast<std::size_t>(i)];
  return m / (range.second - range.first);
}

// Orthogonal (polar) factor of a nearly orthogonal matrix, c (c^T c)^(-1/2).
Mat polar_orthogonal(const Mat& c) {
  try {
    return polar_factor(c);
  } catch (const ContractViolation&) {
    throw StructuralError("eigenframe alignment degenerated");
  }
}

struct FrameDerivatives {
  std::vector<Mat> gam;  // gam[i](j,s) = Gamma_ijs of the aligned frame
  Mat dcluster;          // (i, c): derivative of cluster mean c along E_i
};

// Differences of the eigenframe along each of its own directions.  The
// frames at the stencil points are rotated inside every cluster (polar
// alignment against the base frame) first; raw eigenvectors are not unique
// inside a cluster and would produce spurious derivatives.
FrameDerivatives frame_derivatives(
    const ImmersionChart& chart, const FramedPoint& fp, double h,
    const std::vector<std::pair<int, int>>& ranges, double eps_cluster) {
  const int n = fp.n();
  const int nc = static_cast<int>(ranges.size());
  const Mat P0 = fp.eigenframe();

  FrameDerivatives out;
  out.dcluster = Mat(static_cast<std::size_t>(n), static_cast<std::size_t>(nc));

  for (int i = 0; i < n; ++i) {
    const Vec w = P0.col(static_cast<std::size_t>(i));
    Mat F[2];
    std::vector<double> means[2];
    for (int side = 0; side < 2; ++side) {
      const double sgn = side == 0 ? +1.0 : -1.0;
      Vec up = fp.u;
      for (int m = 0; m < n; ++m)
        up[static_cast<std::size_t>(m)] += sgn * h * w[static_cast<std::size_t>(m)];
      const FramedPoint fq = framed_point(chart, up, h);
      if (cluster_ranges(fq.lambda, eps_cluster) != ranges)
        throw StructuralError(
            "cluster profile changes across the derivative stencil");
      const Mat Pq = fq.eigenframe();
      Mat aligned(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      for (const auto& range : ranges) {
        const int m = range.second - range.first;
        Mat W(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
        Mat B(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
        for (int col = 0; col < m; ++col) {
          W.set_col(static_cast<std::size_t>(col),
                    Pq.col(static_cast<std::size_t>(range.first + col)));
          B.set_col(static_cast<std::size_t>(col),
                    P0.col(static_cast<std::size_t>(range.first + col)));
        }
        const Mat rot = polar_orthogonal(transpose(W) * (fq.g * B));
        const Mat WF = W * rot;
        for (int col = 0; col < m; ++col)
          aligned.set_col(static_cast<std::size_t>(range.first + col),
                          WF.col(static_cast<std::size_t>(col)));
        means[side].push_back(cluster_mean(fq.lambda, range));
      }
      F[side] = std::move(aligned);
    }

    Mat dF = F[0] - F[1];
    dF *= 1.0 / (2.0 * h);
    // covariant correction at the base point
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double corr = 0.0;
        for (int m = 0; m < n; ++m)
          for (int l = 0; l < n; ++l)
            corr += w[static_cast<std::size_t>(m)] * fp.christoffel(k, m, l) *
                    P0(l, j);
        dF(k, j) += corr;
      }
    out.gam.push_back(transpose(dF) * (fp.g * P0));
    for (int c = 0; c < nc; ++c)
      out.dcluster(i, c) =
          (means[0][static_cast<std::size_t>(c)] -
           means[1][static_cast<std::size_t>(c)]) /
          (2.0 * h);
  }
  return out;
}

std::string format_value(const char* fmt, double v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

std::vector<Cluster> cluster_profile(const FramedPoint& fp,
                                     double eps_cluster) {
  std::vector<Cluster> out;
  for (const auto& range : cluster_ranges(fp.lambda, eps_cluster))
    out.push_back(
        {cluster_mean(fp.lambda, range), range.second - range.first});
  return out;
}

const char* split_case_name(SplitCase c) {
  switch (c) {
    case SplitCase::a:
      return "a";
    case SplitCase::b:
      return "b";
    default:
      return "none";
  }
}

SplitReport check_case_a(const std::vector<FramedPoint>& points, double nu,
                         double tol, const ImmersionChart* chart, double h,
                         double eps_cluster) {
  if (points.empty())
    throw ContractViolation("case a check needs at least one sample point");
  const int n = points[0].n();

  SplitReport rep;
  for (const auto& fp : points) rep.samples.push_back(fp.u);

  const auto ranges0 = cluster_ranges(points[0].lambda, eps_cluster);
  if (ranges0.size() != 2)
    throw StructuralError("case a needs exactly two eigenvalue clusters");
  const int k = ranges0[0].second;
  if (!(k > 1 && k < n - 1))
    throw StructuralError("case a needs both factors at least two-dimensional");
  for (const auto& fp : points)
    if (cluster_ranges(fp.lambda, eps_cluster) != ranges0)
      throw StructuralError("cluster multiplicities differ between samples");

  rep.k = k;
  double lsum = 0.0, tsum = 0.0;
  std::vector<double> ls, ts;
  for (const auto& fp : points) {
    ls.push_back(cluster_mean(fp.lambda, ranges0[0]));
    ts.push_back(cluster_mean(fp.lambda, ranges0[1]));
    lsum += ls.back();
    tsum += ts.back();
  }
  rep.Lambda = lsum / static_cast<double>(points.size());
  rep.Theta = tsum / static_cast<double>(points.size());
  rep.factor_curvatures = {nu + rep.Lambda * rep.Lambda,
                           nu + rep.Theta * rep.Theta};
  for (std::size_t p = 0; p < points.size(); ++p) {
    rep.relation_residual =
        std::max(rep.relation_residual, std::abs(nu + ls[p] * ts[p]));
    rep.constancy_residual =
        std::max({rep.constancy_residual, std::abs(ls[p] - rep.Lambda),
                  std::abs(ts[p] - rep.Theta)});
  }

  if (std::abs(rep.Lambda - rep.Theta) <= eps_cluster) {
    rep.diagnostic = "cluster values coincide; no genuine splitting";
    return rep;
  }
  if (rep.relation_residual > tol) {
    rep.diagnostic = "relation residual |nu + Lambda Theta| = " +
                     format_value("%.6g exceeds tolerance", rep.relation_residual);
    return rep;
  }
  if (rep.constancy_residual > tol) {
    rep.diagnostic = "Lambda or Theta drifts across the sample set by " +
                     format_value("%.6g", rep.constancy_residual);
    return rep;
  }

  for (const auto& fp : points)
    for (int i = 0; i < k; ++i)
      for (int j = k; j < n; ++j)
        rep.cross_curvature_residual = std::max(
            rep.cross_curvature_residual,
            std::abs(nu + fp.lambda[static_cast<std::size_t>(i)] *
                              fp.lambda[static_cast<std::size_t>(j)]));
  if (rep.cross_curvature_residual > tol) {
    rep.diagnostic = "cross-block curvature does not vanish";
    return rep;
  }

  if (chart) {
    for (const auto& fp : points) {
      const auto d = frame_derivatives(*chart, fp, h, ranges0, eps_cluster);
      for (int u = k; u < n; ++u)
        for (int v = k; v < n; ++v)
          for (int a = 0; a < k; ++a)
            rep.parallelism_residual =
                std::max(rep.parallelism_residual,
                         std::abs(d.gam[static_cast<std::size_t>(u)](v, a)));
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          for (int u = k; u < n; ++u)
            rep.parallelism_residual =
                std::max(rep.parallelism_residual,
                         std::abs(d.gam[static_cast<std::size_t>(a)](b, u)));
    }
    if (rep.parallelism_residual > tol) {
      rep.diagnostic = "eigendistributions are not parallel, residual " +
                       format_value("%.6g", rep.parallelism_residual);
      return rep;
    }
  } else {
    rep.diagnostic = "parallelism not evaluated: no chart supplied; ";
  }

  rep.split_case = SplitCase::a;
  rep.diagnostic += "product of factors of dimension " +
                    std::to_string(k) + " and " + std::to_string(n - k) +
                    " on the sampled set";
  return rep;
}

SplitReport check_case_b(const std::vector<FramedPoint>& points, double nu,
                         double tol, const ImmersionChart* chart, double h,
                         double eps_cluster) {
  if (points.empty())
    throw ContractViolation("case b check needs at least one sample point");
  const int n = points[0].n();

  SplitReport rep;
  for (const auto& fp : points) rep.samples.push_back(fp.u);

  const auto ranges0 = cluster_ranges(points[0].lambda, eps_cluster);
  if (ranges0.size() != 2)
    throw StructuralError("case b needs exactly two eigenvalue clusters");
  const int m0 = ranges0[0].second - ranges0[0].first;
  const int m1 = ranges0[1].second - ranges0[1].first;
  if (std::min(m0, m1) != 1 || std::max(m0, m1) != n - 1)
    throw StructuralError("case b needs cluster multiplicities (n-1, 1)");
  for (const auto& fp : points)
    if (cluster_ranges(fp.lambda, eps_cluster) != ranges0)
      throw StructuralError("cluster multiplicities differ between samples");

  const int big = (m0 == n - 1) ? 0 : 1;
  const auto big_range = ranges0[static_cast<std::size_t>(big)];
  const int single = ranges0[static_cast<std::size_t>(1 - big)].first;
  rep.k = n - 1;

  std::vector<double> ls, ts;
  double lsum = 0.0, tsum = 0.0;
  for (const auto& fp : points) {
    ls.push_back(cluster_mean(fp.lambda, big_range));
    ts.push_back(fp.lambda[static_cast<std::size_t>(single)]);
    lsum += ls.back();
    tsum += ts.back();
  }
  rep.Lambda = lsum / static_cast<double>(points.size());
  rep.Theta = tsum / static_cast<double>(points.size());
  rep.factor_curvatures = {nu + rep.Lambda * rep.Lambda,
                           nu + rep.Theta * rep.Theta};
  for (std::size_t p = 0; p < points.size(); ++p) {
    rep.relation_residual =
        std::max(rep.relation_residual, std::abs(nu + ls[p] * ts[p]));
    rep.constancy_residual =
        std::max({rep.constancy_residual, std::abs(ls[p] - rep.Lambda),
                  std::abs(ts[p] - rep.Theta)});
  }
  for (const auto& fp : points)
    for (int a = big_range.first; a < big_range.second; ++a)
      rep.cross_curvature_residual = std::max(
          rep.cross_curvature_residual,
          std::abs(nu + fp.lambda[static_cast<std::size_t>(a)] *
                            fp.lambda[static_cast<std::size_t>(single)]));

  if (std::abs(rep.Lambda - rep.Theta) <= eps_cluster) {
    rep.diagnostic = "cluster values coincide; no genuine splitting";
    return rep;
  }

  // The relation and constancy gates come after the derivative stage here:
  // a chart that fails because of a genuinely nonzero Gamma_aan should say
  // so, not hide behind the residuals that nonzero value drags along.
  if (!chart)
    throw ContractViolation(
        "case b confirmation needs a chart for the frame derivatives");

  double ea_lambda = 0.0, gamma_aan = 0.0, en_lambda = 0.0;
  for (const auto& fp : points) {
    const auto d = frame_derivatives(*chart, fp, h, ranges0, eps_cluster);
    double mean_aan = 0.0;
    for (int a = big_range.first; a < big_range.second; ++a) {
      ea_lambda = std::max(ea_lambda, std::abs(d.dcluster(a, big)));
      mean_aan += d.gam[static_cast<std::size_t>(a)](a, single);
      for (int c = big_range.first; c < big_range.second; ++c)
        if (c != a)
          rep.parallelism_residual =
              std::max(rep.parallelism_residual,
                       std::abs(d.gam[static_cast<std::size_t>(a)](c, single)));
      rep.parallelism_residual = std::max(
          rep.parallelism_residual,
          std::abs(d.gam[static_cast<std::size_t>(single)](single, a)));
    }
    mean_aan /= static_cast<double>(n - 1);
    if (std::abs(mean_aan) > std::abs(gamma_aan)) gamma_aan = mean_aan;
    en_lambda = std::max(en_lambda, std::abs(d.dcluster(single, big)));
  }
  rep.gamma_aan = gamma_aan;
  rep.en_lambda = en_lambda;

  if (ea_lambda > tol) {
    rep.diagnostic = "Lambda varies inside the big cluster, |E_a(Lambda)| = " +
                     format_value("%.6g", ea_lambda);
    return rep;
  }
  if (std::abs(gamma_aan) > tol) {
    rep.diagnostic =
        "Gamma_aan = " + format_value("%.6g", gamma_aan) +
        ": the curvature derivative feeds mixed rotations into the holonomy "
        "algebra, full SO(n) expected";
    return rep;
  }
  if (rep.relation_residual > tol) {
    rep.diagnostic = "relation residual |nu + Lambda Theta| = " +
                     format_value("%.6g exceeds tolerance", rep.relation_residual);
    return rep;
  }
  if (rep.constancy_residual > tol) {
    rep.diagnostic = "Lambda or Theta drifts across the sample set by " +
                     format_value("%.6g", rep.constancy_residual);
    return rep;
  }
  if (rep.parallelism_residual > tol) {
    rep.diagnostic = "eigendistributions are not parallel, residual " +
                     format_value("%.6g", rep.parallelism_residual);
    return rep;
  }
  // both sides of E_n(Lambda) = (Lambda - Theta) Gamma_aan must vanish
  if (en_lambda > tol ||
      std::abs((rep.Lambda - rep.Theta) * gamma_aan) > tol) {
    rep.diagnostic = "Lambda varies along the simple direction, |E_n(Lambda)| = " +
                     format_value("%.6g", en_lambda);
    return rep;
  }

  rep.split_case = SplitCase::b;
  rep.diagnostic = "product of an (n-1)-dimensional factor and a segment on "
                   "the sampled set";
  return rep;
}

FlatnessReport flatness_check(const FramedPoint& fp, double nu, double tol) {
  const int n = fp.n();
  if (n < 3) throw ContractViolation("flatness check needs n >= 3");
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      worst = std::max(worst,
                       std::abs(nu + fp.lambda[static_cast<std::size_t>(i)] *
                                         fp.lambda[static_cast<std::size_t>(j)]));
  FlatnessReport out;
  out.flat = worst <= tol;
  if (out.flat && nu > 0.0)
    out.diagnostic =
        "flat point inside a positively curved model: impossible for a "
        "genuine hypersurface, input data is inconsistent";
  else if (out.flat)
    out.diagnostic = "every sectional coefficient nu + lambda_i lambda_j vanishes";
  else
    out.diagnostic =
        "largest |nu + lambda_i lambda_j| = " + format_value("%.6g", worst);
  return out;
}

}  // namespace holosurf
