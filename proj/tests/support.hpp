#pragma once

// Shared helpers for the test suites.  The closure-rank and wedge oracles
// here are deliberately written against the plain definitions (Euclidean
// vectorization, pivoted Gram-Schmidt) so they stay independent of the
// library's worklist implementation.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "holosurf/modelspace.hpp"
#include "holosurf/smallmat.hpp"

namespace testsupport {

using holosurf::Mat;
using holosurf::SkewEndo;
using holosurf::Vec;

inline double urand(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return lo + (hi - lo) * holosurf::uniform01(rng());
}

inline Mat random_skew(std::mt19937_64& rng, std::size_t n, double scale) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = scale * urand(rng);
      m(i, j) = v;
      m(j, i) = -v;
    }
  return m;
}

inline Mat random_symmetric(std::mt19937_64& rng, std::size_t n,
                            double scale) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = scale * urand(rng);
      m(i, j) = m(j, i) = v;
    }
  return m;
}

inline Mat random_rotation(std::mt19937_64& rng, std::size_t n,
                           double scale = 0.8) {
  return holosurf::mat_exp(SkewEndo(random_skew(rng, n, scale)));
}

// Wedge oracle: apply the defining formula z -> g(y,z) x - g(x,z) y to each
// basis vector and record the resulting columns.
inline Mat wedge_oracle(const Vec& x, const Vec& y, const Mat& g) {
  const std::size_t n = x.size();
  Mat m(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    Vec z(n);
    z[col] = 1.0;
    const double gyz = dot(g * y, z);
    const double gxz = dot(g * x, z);
    for (std::size_t row = 0; row < n; ++row)
      m(row, col) = gyz * x[row] - gxz * y[row];
  }
  return m;
}

inline std::vector<double> vectorize(const Mat& m) {
  std::vector<double> v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

// Rank by pivoted Gram-Schmidt over the vectorized matrices: repeatedly pick
// the row of largest remaining norm, normalize, eliminate, until everything
// left is below tol.
inline int rank_pivoted(std::vector<std::vector<double>> rows, double tol) {
  int rank = 0;
  const auto nrm = [](const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return std::sqrt(s);
  };
  while (true) {
    std::size_t best = 0;
    double bestn = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double nv = nrm(rows[i]);
      if (nv > bestn) {
        bestn = nv;
        best = i;
      }
    }
    if (bestn <= tol) return rank;
    ++rank;
    std::vector<double> pivot = rows[best];
    for (double& v : pivot) v /= bestn;
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto& r : rows) {
      double c = 0.0;
      for (std::size_t k = 0; k < r.size(); ++k) c += r[k] * pivot[k];
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= c * pivot[k];
    }
  }
}

inline int rank_of(const std::vector<Mat>& mats, double tol) {
  std::vector<std::vector<double>> rows;
  rows.reserve(mats.size());
  for (const auto& m : mats) rows.push_back(vectorize(m));
  return rank_pivoted(std::move(rows), tol);
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

// Brute-force bracket-closure dimension: keep a set of representatives,
// bracket every pair each round, admit whatever raises the rank, stop when a
// round adds nothing.
inline int closure_dim_oracle(const std::vector<Mat>& generators,
                              double tol = 1e-9) {
  std::vector<Mat> reps;
  for (const auto& g : generators) {
    std::vector<Mat> trial = reps;
    trial.push_back(g);
    if (rank_of(trial, tol) > static_cast<int>(reps.size()))
      reps.push_back(g);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t count = reps.size();
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        Mat br = commutator(reps[i], reps[j]);
        std::vector<Mat> trial = reps;
        trial.push_back(br);
        if (rank_of(trial, tol) > static_cast<int>(reps.size())) {
          reps.push_back(std::move(br));
          grew = true;
        }
      }
    }
  }
  return static_cast<int>(reps.size());
}

// ---- reference charts ----
// Explicit immersions written straight from the classical formulas; the
// geometry suites compare library output against their known curvature.

// k angles -> unit vector in R^(k+1), the usual nested spherical formula.
// mirror negates the last coordinate, which flips the chart orientation
// without touching the metric.
inline Vec sphere_angles(const std::vector<double>& a, bool mirror = false) {
  const std::size_t k = a.size();
  Vec out(k + 1);
  double run = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = run * std::cos(a[i]);
    run *= std::sin(a[i]);
  }
  out[k] = mirror ? -run : run;
  return out;
}

// Sphere of geodesic radius rho about a pole of S^(n+1).  Umbilical with
// principal curvature cot(rho) toward the pole.
inline holosurf::ImmersionChart geodesic_sphere_chart(int n, double rho,
                                                      bool mirror = false) {
  using holosurf::AmbientModel;
  using holosurf::Box;
  using holosurf::ImmersionChart;
  Box box{std::vector<double>(static_cast<std::size_t>(n), 0.35),
          std::vector<double>(static_cast<std::size_t>(n), 1.25)};
  auto eval = [n, rho, mirror](const Vec& u) {
    std::vector<double> ang(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) ang[i] = u[i];
    const Vec phi = sphere_angles(ang, mirror);
    Vec out(static_cast<std::size_t>(n) + 2);
    out[0] = std::cos(rho);
    for (int i = 0; i <= n; ++i)
      out[static_cast<std::size_t>(i) + 1] =
          std::sin(rho) * phi[static_cast<std::size_t>(i)];
    return out;
  };
  return ImmersionChart(n, AmbientModel::make(1.0, n), box, eval,
                        "test-geodesic-sphere");
}

// Product S^k(r) x S^(n-k)(s) in S^(n+1), r^2 + s^2 = 1.  Principal
// curvatures s/r (k-fold) and -r/s, up to overall orientation.
inline holosurf::ImmersionChart clifford_chart(int n, int k, double r,
                                               bool mirror = false) {
  using holosurf::AmbientModel;
  using holosurf::Box;
  using holosurf::ImmersionChart;
  const double s = std::sqrt(1.0 - r * r);
  Box box{std::vector<double>(static_cast<std::size_t>(n), 0.35),
          std::vector<double>(static_cast<std::size_t>(n), 1.25)};
  auto eval = [n, k, r, s, mirror](const Vec& u) {
    std::vector<double> a(static_cast<std::size_t>(k));
    std::vector<double> b(static_cast<std::size_t>(n - k));
    for (int i = 0; i < k; ++i) a[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
    for (int i = k; i < n; ++i)
      b[static_cast<std::size_t>(i - k)] = u[static_cast<std::size_t>(i)];
    const Vec pa = sphere_angles(a);
    const Vec pb = sphere_angles(b, mirror);
    Vec out(static_cast<std::size_t>(n) + 2);
    for (std::size_t i = 0; i < pa.size(); ++i) out[i] = r * pa[i];
    for (std::size_t i = 0; i < pb.size(); ++i) out[pa.size() + i] = s * pb[i];
    return out;
  };
  return ImmersionChart(n, AmbientModel::make(1.0, n), box, eval,
                        "test-clifford");
}

// Rotationally symmetric hypersurface of S^(n+1) whose profile latitude
// wobbles with u_1.  The spectrum splits (n-1, 1) like a product, but the
// profile is not constant, so nothing about it is parallel; the chart of
// choice when a test needs a product-looking spectrum without the product.
inline holosurf::ImmersionChart wavy_rotational_chart(int n,
                                                      double alpha0 = 0.9,
                                                      double amp = 0.2,
                                                      double freq = 1.0) {
  using holosurf::AmbientModel;
  using holosurf::Box;
  using holosurf::ImmersionChart;
  std::vector<double> lo(static_cast<std::size_t>(n), 0.35);
  std::vector<double> hi(static_cast<std::size_t>(n), 1.25);
  lo[0] = 0.3;
  hi[0] = 1.2;
  auto eval = [n, alpha0, amp, freq](const Vec& u) {
    const double t = u[0];
    const double alpha = alpha0 + amp * std::sin(freq * t);
    std::vector<double> ang(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i)
      ang[static_cast<std::size_t>(i - 1)] = u[static_cast<std::size_t>(i)];
    const Vec phi = sphere_angles(ang);
    Vec out(static_cast<std::size_t>(n) + 2);
    out[0] = std::cos(alpha) * std::cos(t);
    out[1] = std::cos(alpha) * std::sin(t);
    for (int i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i) + 2] =
          std::sin(alpha) * phi[static_cast<std::size_t>(i)];
    return out;
  };
  return ImmersionChart(n, AmbientModel::make(1.0, n), Box{lo, hi}, eval,
                        "test-wavy-rotational");
}

// Affine hyperplane of Euclidean space; the zero-curvature baseline where
// every transport must come back exactly where it started.
inline holosurf::ImmersionChart plane_chart(int n) {
  using holosurf::AmbientModel;
  using holosurf::Box;
  using holosurf::ImmersionChart;
  const std::vector<double> lo(static_cast<std::size_t>(n), -0.8);
  const std::vector<double> hi(static_cast<std::size_t>(n), 0.8);
  auto eval = [n](const Vec& u) {
    Vec out(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
    return out;
  };
  return ImmersionChart(n, AmbientModel::make(0.0, n), Box{lo, hi}, eval,
                        "test-plane");
}

// Standard horosphere of H^(n+1) in the Minkowski hyperboloid model; flat,
// umbilical with A = identity (orientation permitting).
inline holosurf::ImmersionChart horosphere_chart(int n, bool mirror = false) {
  using holosurf::AmbientModel;
  using holosurf::Box;
  using holosurf::ImmersionChart;
  Box box{std::vector<double>(static_cast<std::size_t>(n), -0.8),
          std::vector<double>(static_cast<std::size_t>(n), 0.8)};
  auto eval = [n, mirror](const Vec& u) {
    Vec w = u;
    if (mirror) w[static_cast<std::size_t>(n) - 1] *= -1.0;
    double q = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) q += w[i] * w[i];
    Vec out(static_cast<std::size_t>(n) + 2);
    out[0] = 1.0 + 0.5 * q;
    for (int i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i) + 1] = w[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(n) + 1] = 0.5 * q;
    return out;
  };
  return ImmersionChart(n, AmbientModel::make(-1.0, n), box, eval,
                        "test-horosphere");
}

}  // namespace testsupport
