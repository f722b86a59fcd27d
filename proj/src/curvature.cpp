#include "holosurf/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

namespace holosurf {

namespace {

constexpr double kMetricPDTol = 1e-10;
// Stencils that difference an already-differenced quantity never shrink
// below this step: their roundoff grows like eps/h^3, so h = 1e-4 would
// bury the signal while 1e-3 keeps both error terms near 1e-6.
constexpr double kNestedStencilFloor = 1e-3;

Vec shifted(const Vec& u, int axis, double delta) {
  Vec v = u;
  v[static_cast<std::size_t>(axis)] += delta;
  return v;
}

Mat outer(const Vec& a, const Vec& b) {
  Mat m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

// Metric from first-derivative stencils alone; cheaper than a full jet and
// all the Christoffel differences need.
Mat metric_only(const ImmersionChart& chart, const Vec& u, double h) {
  const int n = chart.n();
  const auto& model = chart.model();
  std::vector<Vec> d1;
  d1.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec up = shifted(u, i, +h), um = shifted(u, i, -h);
    if (!chart.domain().contains(up) || !chart.domain().contains(um))
      throw StencilDomainError("metric stencil leaves the chart domain");
    Vec d = chart(up) - chart(um);
    d *= 1.0 / (2.0 * h);
    d1.push_back(std::move(d));
  }
  Mat g(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = model.form(d1[static_cast<std::size_t>(i)],
                           d1[static_cast<std::size_t>(j)]);
      g(j, i) = g(i, j);
    }
  return g;
}

std::vector<double> christoffels_at(const ImmersionChart& chart, const Vec& u,
                                    double h, const Mat* g_center) {
  const int n = chart.n();
  const Mat g = g_center ? *g_center : metric_only(chart, u, h);
  const Mat ginv = inverse(g);
  std::vector<Mat> dg;
  dg.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Mat diff = metric_only(chart, shifted(u, i, +h), h) -
               metric_only(chart, shifted(u, i, -h), h);
    diff *= 1.0 / (2.0 * h);
    dg.push_back(std::move(diff));
  }
  std::vector<double> gamma(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          const auto li = static_cast<std::size_t>(l);
          s += ginv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) +
                             dg[static_cast<std::size_t>(j)](i, l) -
                             dg[li](i, j));
        }
        s *= 0.5;
        gamma[(static_cast<std::size_t>(k) * n + i) * n + j] = s;
        gamma[(static_cast<std::size_t>(k) * n + j) * n + i] = s;
      }
  return gamma;
}

struct ShapeData {
  Mat g;        // induced metric
  Mat H;        // second fundamental form along xi
  Mat A_coord;  // g^{-1} H
};

ShapeData shape_data(const ImmersionChart& chart, const ChartJet& cj,
                     int normal_sign) {
  const int n = chart.n();
  const auto& model = chart.model();
  const TangentNormalFrame fr = tangent_normal_frame(chart, cj, normal_sign);
  ShapeData sd;
  sd.g = Mat(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  sd.H = Mat(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const auto ii = static_cast<std::size_t>(i);
      const auto jj = static_cast<std::size_t>(j);
      sd.g(i, j) = sd.g(j, i) = model.form(cj.d1[ii], cj.d1[jj]);
      sd.H(i, j) = sd.H(j, i) = model.form(cj.d2(i, j), fr.xi);
    }
  const SymEigen ge = sym_eigen(sd.g);
  if (ge.values[static_cast<std::size_t>(n - 1)] <=
      kMetricPDTol * std::max(1.0, ge.values[0]))
    throw InvalidChartError("induced metric is not positive definite");
  sd.A_coord = inverse(sd.g) * sd.H;
  return sd;
}

// Columns g-orthonormalized from the coordinate basis, in order.
Mat orthonormal_frame(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  Mat E = Mat::identity(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    Vec v = E.col(static_cast<std::size_t>(a));
    for (int pass = 0; pass < 2; ++pass)
      for (int b = 0; b < a; ++b) {
        const Vec eb = E.col(static_cast<std::size_t>(b));
        v -= dot(v, g * eb) * eb;
      }
    const double q = dot(v, g * v);
    if (!(q > 0.0))
      throw InvalidChartError("frame vector collapsed while orthonormalizing");
    v *= 1.0 / std::sqrt(q);
    E.set_col(static_cast<std::size_t>(a), v);
  }
  return E;
}

struct FrameSample {
  Mat E;
  Mat A_frame;
};

FrameSample frame_sample(const ImmersionChart& chart, const Vec& u, double h,
                         const std::function<void(const Vec&, Mat&)>& tamper) {
  const ChartJet cj = jet(chart, u, h);
  const ShapeData sd = shape_data(chart, cj, +1);
  FrameSample fs;
  fs.E = orthonormal_frame(sd.g);
  const Mat af = transpose(fs.E) * (sd.H * fs.E);
  fs.A_frame = 0.5 * (af + transpose(af));
  if (tamper) tamper(u, fs.A_frame);
  return fs;
}

double pair_coeff(const FramedPoint& fp, int i, int j) {
  return fp.nu + fp.lambda[static_cast<std::size_t>(i)] *
                     fp.lambda[static_cast<std::size_t>(j)];
}

struct RiemannCoord {
  int n = 0;
  std::vector<double> r;

  double at(int l, int k, int i, int j) const {
    return r[((static_cast<std::size_t>(l) * n + k) * n + i) * n + j];
  }
};

// R(d_i, d_j) d_k = R^l_kij d_l from the Christoffels and their central
// differences, convention R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X.
RiemannCoord riemann_coord(const ImmersionChart& chart, const Vec& u,
                           double h) {
  const int n = chart.n();
  const Mat g0 = metric_only(chart, u, h);
  const std::vector<double> gam = christoffels_at(chart, u, h, &g0);
  std::vector<std::vector<double>> dgam(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::vector<double> gp =
        christoffels_at(chart, shifted(u, i, +h), h, nullptr);
    const std::vector<double> gm =
        christoffels_at(chart, shifted(u, i, -h), h, nullptr);
    auto& d = dgam[static_cast<std::size_t>(i)];
    d.resize(gp.size());
    for (std::size_t t = 0; t < gp.size(); ++t)
      d[t] = (gp[t] - gm[t]) / (2.0 * h);
  }
  const auto G = [&](int k, int i, int j) {
    return gam[(static_cast<std::size_t>(k) * n + i) * n + j];
  };
  const auto dG = [&](int d, int l, int i, int j) {
    return dgam[static_cast<std::size_t>(d)]
               [(static_cast<std::size_t>(l) * n + i) * n + j];
  };
  RiemannCoord rc;
  rc.n = n;
  rc.r.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = dG(i, l, j, k) - dG(j, l, i, k);
          for (int s = 0; s < n; ++s)
            v += G(l, i, s) * G(s, j, k) - G(l, j, s) * G(s, i, k);
          rc.r[((static_cast<std::size_t>(l) * n + k) * n + i) * n + j] = v;
        }
  return rc;
}

double sectional_from(const RiemannCoord& rc, const Mat& g, const Vec& x,
                      const Vec& y) {
  const int n = rc.n;
  Vec z(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s += rc.at(l, k, i, j) * x[static_cast<std::size_t>(i)] *
               y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k)];
    z[static_cast<std::size_t>(l)] = s;
  }
  const double num = dot(z, g * x);
  const double xx = dot(x, g * x), yy = dot(y, g * y), xy = dot(x, g * y);
  return num / (xx * yy - xy * xy);
}

}  // namespace

double FramedPoint::christoffel(int k, int i, int j) const {
  const int nn = n();
  return gamma[(static_cast<std::size_t>(k) * nn + i) * nn + j];
}

Mat FramedPoint::eigenframe() const { return frame * eig; }

FramedPoint framed_point(const ImmersionChart& chart, const Vec& u, double h,
                         int normal_sign) {
  const ChartJet cj = jet(chart, u, h);
  const ShapeData sd = shape_data(chart, cj, normal_sign);
  FramedPoint fp;
  fp.u = u;
  fp.nu = chart.model().nu;
  fp.g = sd.g;
  fp.gamma = christoffels_at(chart, u, h, &sd.g);
  fp.A_coord = sd.A_coord;
  fp.frame = orthonormal_frame(sd.g);
  const Mat af = transpose(fp.frame) * (sd.H * fp.frame);
  fp.A_frame = 0.5 * (af + transpose(af));
  const SymEigen es = sym_eigen(fp.A_frame);
  fp.lambda = es.values;
  fp.eig = es.vectors;
  return fp;
}

std::vector<double> christoffel_symbols(const ImmersionChart& chart,
                                        const Vec& u, double h) {
  return christoffels_at(chart, u, h, nullptr);
}

SkewEndo curvature_action(const CurvatureOp& op, const Vec& x, const Vec& y) {
  const Vec ax = op.A_frame * x, ay = op.A_frame * y;
  Mat m = outer(x, y) - outer(y, x);
  m *= op.nu;
  m += outer(ax, ay) - outer(ay, ax);
  return SkewEndo(skew_part(m));
}

SkewEndo curvature_endo(const FramedPoint& fp, int i, int j) {
  const int n = fp.n();
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw ContractViolation("curvature_endo index out of range");
  if (i == j)
    throw ContractViolation("curvature_endo needs two distinct indices");
  Vec ei(static_cast<std::size_t>(n)), ej(static_cast<std::size_t>(n));
  ei[static_cast<std::size_t>(i)] = 1.0;
  ej[static_cast<std::size_t>(j)] = 1.0;
  Mat adiag(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    adiag(a, a) = fp.lambda[static_cast<std::size_t>(a)];
  return curvature_action(CurvatureOp{fp.nu, adiag}, ei, ej);
}

double curvature_scale(const FramedPoint& fp) {
  const int n = fp.n();
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m = std::max(m, std::abs(pair_coeff(fp, i, j)));
  return m;
}

SkewEndo CurvatureDerivative::at(int i, int j) const {
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw ContractViolation("curvature derivative index out of range");
  if (i == j)
    return SkewEndo(
        Mat(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0.0));
  const bool flip = i > j;
  if (flip) std::swap(i, j);
  const int idx = i * n - i * (i + 1) / 2 + (j - i - 1);
  Mat m = comp[static_cast<std::size_t>(idx)];
  if (flip) m *= -1.0;
  return SkewEndo(std::move(m));
}

CurvatureDerivative nabla_R(const ImmersionChart& chart, const Vec& u,
                            double h, int V) {
  const FramedPoint fp = framed_point(chart, u, h);
  const int n = fp.n();
  if (V < 0 || V >= n)
    throw ContractViolation("nabla_R frame index out of range");

  const Mat P0 = fp.eigenframe();
  const Vec w = P0.col(static_cast<std::size_t>(V));

  // First-order parallel transport of the frame along t -> u + t w; with it
  // plain differences of components are covariant ones.
  Mat C(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += w[static_cast<std::size_t>(i)] * fp.christoffel(k, i, l);
      C(k, l) = s;
    }
  const Mat drift = h * (C * P0);

  // S(a,b) = g(p_a, p_b), T(a,b) = g(A p_a, p_b) at the offset point; all
  // curvature components reduce to these two matrices.
  struct Side {
    Mat S, T;
  };
  const auto side = [&](double sgn) {
    Vec up = u;
    for (int i = 0; i < n; ++i)
      up[static_cast<std::size_t>(i)] += sgn * h * w[static_cast<std::size_t>(i)];
    const ChartJet cj = jet(chart, up, h);
    const ShapeData sd = shape_data(chart, cj, +1);
    Mat P = P0;
    P -= sgn * drift;
    const Mat gP = sd.g * P;
    Side out;
    out.S = transpose(P) * gP;
    out.T = transpose(sd.A_coord * P) * gP;
    return out;
  };
  const Side plus = side(+1.0), minus = side(-1.0);

  const auto comps = [&](const Side& sd, int a, int b) {
    Mat N(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d)
        N(c, d) =
            fp.nu * (sd.S(b, d) * sd.S(a, c) - sd.S(a, d) * sd.S(b, c)) +
            sd.T(b, d) * sd.T(a, c) - sd.T(a, d) * sd.T(b, c);
    return N;
  };

  CurvatureDerivative out;
  out.n = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Mat diff = comps(plus, a, b) - comps(minus, a, b);
      diff *= 1.0 / (2.0 * h);
      // transported frames are orthonormal only to O(h^2); the symmetric
      // contamination sits exactly in the part skew_part removes
      out.comp.push_back(skew_part(diff));
    }
  return out;
}

double codazzi_residual(const ImmersionChart& chart, const Vec& u, double h,
                        const std::function<void(const Vec&, Mat&)>& tamper) {
  const int n = chart.n();
  const FrameSample f0 = frame_sample(chart, u, h, tamper);
  const Mat g0 = metric_only(chart, u, h);
  const std::vector<double> gam = christoffels_at(chart, u, h, &g0);

  std::vector<Mat> dA, dE;
  dA.reserve(static_cast<std::size_t>(n));
  dE.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const FrameSample sp = frame_sample(chart, shifted(u, j, +h), h, tamper);
    const FrameSample sm = frame_sample(chart, shifted(u, j, -h), h, tamper);
    Mat da = sp.A_frame - sm.A_frame;
    da *= 1.0 / (2.0 * h);
    Mat de = sp.E - sm.E;
    de *= 1.0 / (2.0 * h);
    dA.push_back(std::move(da));
    dE.push_back(std::move(de));
  }

  // nabJ[j] columns: coordinate covariant derivative of each frame vector
  // along d_j.
  std::vector<Mat> nabJ(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Mat m = dE[static_cast<std::size_t>(j)];
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += gam[(static_cast<std::size_t>(k) * n + j) * n + l] * f0.E(l, a);
        m(k, a) += s;
      }
    nabJ[static_cast<std::size_t>(j)] = std::move(m);
  }

  // Frame connection and derivative of A along each frame vector.
  std::vector<Mat> nablaA(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Mat Mi(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    Mat dAi(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double c = f0.E(j, i);
      Mat term = nabJ[static_cast<std::size_t>(j)];
      term *= c;
      Mi += term;
      Mat aterm = dA[static_cast<std::size_t>(j)];
      aterm *= c;
      dAi += aterm;
    }
    const Mat ghat = transpose(Mi) * (g0 * f0.E);
    nablaA[static_cast<std::size_t>(i)] =
        dAi - ghat * f0.A_frame - f0.A_frame * transpose(ghat);
  }

  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double s2 = 0.0;
      for (int a = 0; a < n; ++a) {
        const double d = nablaA[static_cast<std::size_t>(i)](a, j) -
                         nablaA[static_cast<std::size_t>(j)](a, i);
        s2 += d * d;
      }
      worst = std::max(worst, std::sqrt(s2));
    }
  return worst;
}

double sectional_curvature_intrinsic(const ImmersionChart& chart, const Vec& u,
                                     double h, int i, int j) {
  const FramedPoint fp = framed_point(chart, u, h);
  const int n = fp.n();
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw ContractViolation("sectional curvature index out of range");
  if (i == j)
    throw ContractViolation("sectional curvature needs two distinct indices");
  const double hg = std::max(h, kNestedStencilFloor);
  const RiemannCoord rc = riemann_coord(chart, u, hg);
  const Mat P = fp.eigenframe();
  return sectional_from(rc, fp.g, P.col(static_cast<std::size_t>(i)),
                        P.col(static_cast<std::size_t>(j)));
}

double gauss_crosscheck_residual(const ImmersionChart& chart, const Vec& u,
                                 double h) {
  const FramedPoint fp = framed_point(chart, u, h);
  const int n = fp.n();
  const double hg = std::max(h, kNestedStencilFloor);
  const RiemannCoord rc = riemann_coord(chart, u, hg);
  const Mat P = fp.eigenframe();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double k = sectional_from(rc, fp.g, P.col(static_cast<std::size_t>(i)),
                                      P.col(static_cast<std::size_t>(j)));
      worst = std::max(worst, std::abs(k - pair_coeff(fp, i, j)));
    }
  return worst;
}

double second_bianchi_residual(const ImmersionChart& chart, const Vec& u,
                               double h) {
  const int n = chart.n();
  if (n < 3) return 0.0;
  std::vector<CurvatureDerivative> D;
  D.reserve(static_cast<std::size_t>(n));
  for (int V = 0; V < n; ++V) D.push_back(nabla_R(chart, u, h, V));
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        Mat s = D[static_cast<std::size_t>(a)].at(b, c).mat();
        s += D[static_cast<std::size_t>(b)].at(c, a).mat();
        s += D[static_cast<std::size_t>(c)].at(a, b).mat();
        worst = std::max(worst, skew_norm(SkewEndo(std::move(s))));
      }
  return worst;
}

}  // namespace holosurf
