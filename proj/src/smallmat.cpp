#include "holosurf/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

namespace holosurf {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

constexpr double kSkewAbsTol = 1e-12;

}  // namespace

Vec& Vec::operator+=(const Vec& o) {
  require(size() == o.size(), "Vec size mismatch in +=");
  for (std::size_t i = 0; i < size(); ++i) e_[i] += o[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  require(size() == o.size(), "Vec size mismatch in -=");
  for (std::size_t i = 0; i < size(); ++i) e_[i] -= o[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (auto& x : e_) x *= s;
  return *this;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double s, Vec a) { return a *= s; }

double dot(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "Vec size mismatch in dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Mat::col(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec Mat::row(std::size_t i) const {
  Vec v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

void Mat::set_col(std::size_t j, const Vec& v) {
  require(v.size() == rows_, "set_col size mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Mat& Mat::operator+=(const Mat& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "Mat shape mismatch in +=");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "Mat shape mismatch in -=");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (auto& x : e_) x *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(double s, Mat a) { return a *= s; }

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols() == b.rows(), "Mat shape mismatch in *");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vec operator*(const Mat& a, const Vec& x) {
  require(a.cols() == x.size(), "Mat/Vec shape mismatch in *");
  Vec y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double frobenius(const Mat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double max_abs(const Mat& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j)));
  return m;
}

double max_abs(const Vec& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

namespace {

// LU with partial pivoting shared by inverse() and determinant().
// Returns false when a pivot degenerates.
bool lu_decompose(Mat& a, std::vector<std::size_t>& perm, int& sign) {
  const std::size_t n = a.rows();
  perm.resize(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      const double f = a(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

}  // namespace

Mat inverse(const Mat& a) {
  require(a.rows() == a.cols(), "inverse needs a square matrix");
  const std::size_t n = a.rows();
  Mat lu = a;
  std::vector<std::size_t> perm;
  int sign = 0;
  if (!lu_decompose(lu, perm, sign))
    throw ContractViolation("inverse of a singular matrix");
  Mat inv(n, n);
  Vec x(n);
  for (std::size_t c = 0; c < n; ++c) {
    // Solve L y = P e_c, then U x = y.
    for (std::size_t i = 0; i < n; ++i) {
      double s = (perm[i] == c) ? 1.0 : 0.0;
      for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = x[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= lu(ii, j) * x[j];
      x[ii] = s / lu(ii, ii);
    }
    inv.set_col(c, x);
  }
  return inv;
}

double determinant(const Mat& a) {
  require(a.rows() == a.cols(), "determinant needs a square matrix");
  Mat lu = a;
  std::vector<std::size_t> perm;
  int sign = 0;
  if (!lu_decompose(lu, perm, sign)) return 0.0;
  double d = sign;
  for (std::size_t i = 0; i < a.rows(); ++i) d *= lu(i, i);
  return d;
}

Mat skew_part(const Mat& a) {
  require(a.rows() == a.cols(), "skew_part needs a square matrix");
  Mat s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      s(i, j) = 0.5 * (a(i, j) - a(j, i));
  return s;
}

SkewEndo::SkewEndo(Mat m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), "SkewEndo needs a square matrix");
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (std::abs(m_(i, j) + m_(j, i)) > kSkewAbsTol)
        throw ContractViolation("SkewEndo matrix is not skew-symmetric");
}

SkewEndo::SkewEndo(Mat m, const Mat& metric) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), "SkewEndo needs a square matrix");
  require(metric.rows() == m_.rows() && metric.cols() == m_.cols(),
          "SkewEndo metric shape mismatch");
  // m^T g + g m = 0 expresses skewness of the endomorphism w.r.t. g.
  const Mat r = transpose(m_) * metric + metric * m_;
  if (max_abs(r) > kSkewAbsTol * std::max(1.0, max_abs(metric) * max_abs(m_)))
    throw ContractViolation("endomorphism is not skew w.r.t. the metric");
}

SkewEndo wedge(const Vec& x, const Vec& y) {
  require(x.size() == y.size(), "wedge size mismatch");
  const std::size_t n = x.size();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = x[i] * y[j] - y[i] * x[j];
  return SkewEndo(std::move(m));
}

SkewEndo wedge(const Vec& x, const Vec& y, const Mat& g) {
  require(x.size() == y.size(), "wedge size mismatch");
  require(g.rows() == x.size() && g.cols() == x.size(),
          "wedge metric shape mismatch");
  const Vec gx = g * x;
  const Vec gy = g * y;
  const std::size_t n = x.size();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = x[i] * gy[j] - y[i] * gx[j];
  return SkewEndo(std::move(m), g);
}

SkewEndo wedge_unit(std::size_t i, std::size_t j, std::size_t n) {
  require(i < n && j < n && i != j, "wedge_unit needs distinct indices < n");
  Mat m(n, n);
  m(i, j) = 1.0;
  m(j, i) = -1.0;
  return SkewEndo(std::move(m));
}

SkewEndo bracket(const SkewEndo& a, const SkewEndo& b) {
  require(a.dim() == b.dim(), "bracket dimension mismatch");
  Mat c = a.mat() * b.mat() - b.mat() * a.mat();
  // ab - ba is skew up to roundoff; symmetrize exactly.
  return SkewEndo(skew_part(c));
}

double skew_inner(const SkewEndo& a, const SkewEndo& b) {
  require(a.dim() == b.dim(), "skew_inner dimension mismatch");
  double tr = 0.0;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) tr += a.mat()(i, k) * b.mat()(k, i);
  return -0.5 * tr;
}

double skew_norm(const SkewEndo& a) {
  return std::sqrt(std::max(0.0, skew_inner(a, a)));
}

SymEigen sym_eigen(const Mat& a) {
  require(a.rows() == a.cols(), "sym_eigen needs a square matrix");
  const std::size_t n = a.rows();
  const double scale = std::max(1.0, frobenius(a));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-9 * scale)
        throw ContractViolation("sym_eigen input is not symmetric");

  Mat d = a;
  // Enforce exact symmetry so the sweep below needs no tie-breaking.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      d(i, j) = d(j, i) = 0.5 * (d(i, j) + d(j, i));
  Mat v = Mat::identity(n);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += d(i, j) * d(i, j);
    if (std::sqrt(2.0 * off) <= 1e-15 * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = d(p, q);
        if (std::abs(apq) <=
            1e-18 * (std::abs(d(p, p)) + std::abs(d(q, q)) + scale))
          continue;
        const double theta = (d(q, q) - d(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // d <- J^T d J with the rotation acting on rows/cols p, q.
        for (std::size_t r = 0; r < n; ++r) {
          const double drp = d(r, p), drq = d(r, q);
          d(r, p) = c * drp - s * drq;
          d(r, q) = s * drp + c * drq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double dpr = d(p, r), dqr = d(q, r);
          d(p, r) = c * dpr - s * dqr;
          d(q, r) = s * dpr + c * dqr;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return d(i, i) > d(j, j);
  });

  SymEigen out;
  out.values = Vec(n);
  out.vectors = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d(order[k], order[k]);
    Vec column = v.col(order[k]);
    // Deterministic sign: largest-magnitude component positive.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(column[i]) > std::abs(column[imax])) imax = i;
    if (column[imax] < 0.0) column *= -1.0;
    out.vectors.set_col(k, column);
  }
  return out;
}

namespace {

double skew_inner_mat(const Mat& a, const Mat& b) {
  double tr = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) tr += a(i, k) * b(k, i);
  return -0.5 * tr;
}

}  // namespace

SpanBasis closure_under_brackets(const std::vector<SkewEndo>& generators,
                                 double tol) {
  require(!generators.empty(), "closure needs at least one generator");
  const std::size_t n = generators.front().dim();
  for (const auto& g : generators)
    require(g.dim() == n, "closure generators have mixed dimensions");
  require(tol > 0.0, "closure tolerance must be positive");
  const std::size_t max_dim = n * (n - 1) / 2;

  SpanBasis basis;
  std::deque<Mat> work;
  for (const auto& g : generators) work.push_back(g.mat());

  while (!work.empty() && basis.dim() < max_dim) {
    Mat x = std::move(work.front());
    work.pop_front();
    // Two Gram-Schmidt passes keep the admitted basis orthonormal even when
    // a candidate is nearly inside the span.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis.elements) {
        const double c = skew_inner_mat(x, b.mat());
        x -= c * b.mat();
      }
    }
    Mat xs = skew_part(x);
    const double r = std::sqrt(std::max(0.0, skew_inner_mat(xs, xs)));
    if (r <= tol) continue;
    xs *= 1.0 / r;
    SkewEndo e(skew_part(xs));
    for (const auto& b : basis.elements) {
      work.push_back(bracket(b, e).mat());
    }
    basis.elements.push_back(std::move(e));
  }
  return basis;
}

namespace {

// Orthonormal basis of symmetric n x n matrices under the Frobenius inner
// product: E_ii, then (E_ij + E_ji)/sqrt(2) for i < j.
std::vector<Mat> sym_basis(std::size_t n) {
  std::vector<Mat> basis;
  basis.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    Mat m(n, n);
    m(i, i) = 1.0;
    basis.push_back(std::move(m));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Mat m(n, n);
      m(i, j) = m(j, i) = r;
      basis.push_back(std::move(m));
    }
  return basis;
}

double frob_inner(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  return s;
}

std::vector<std::vector<int>> cluster_indices(const Vec& sorted_desc,
                                              double gap) {
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < sorted_desc.size(); ++i) {
    if (i == 0 || sorted_desc[i - 1] - sorted_desc[i] > gap)
      groups.emplace_back();
    groups.back().push_back(static_cast<int>(i));
  }
  return groups;
}

}  // namespace

std::vector<std::vector<int>> invariant_blocks(const SpanBasis& basis,
                                               std::size_t n, double tol) {
  require(n >= 1, "invariant_blocks needs n >= 1");
  for (const auto& b : basis.elements)
    require(b.dim() == n, "invariant_blocks basis dimension mismatch");

  if (basis.elements.empty()) {
    std::vector<std::vector<int>> singletons(n);
    for (std::size_t i = 0; i < n; ++i)
      singletons[i].push_back(static_cast<int>(i));
    return singletons;
  }

  // A symmetric matrix commuting with every basis element is constant on
  // each irreducible invariant subspace, so the eigenspaces of a generic
  // element of that commutant realize the finest invariant decomposition.
  // The commutant is the kernel of G = sum_k L_k^T L_k where
  // L_k : X -> [X, B_k] acts on symmetric matrices.
  const auto sbasis = sym_basis(n);
  const std::size_t m = sbasis.size();
  Mat g_mat(m, m);
  for (const auto& b : basis.elements) {
    std::vector<Mat> lcols;
    lcols.reserve(m);
    for (std::size_t t = 0; t < m; ++t)
      lcols.push_back(sbasis[t] * b.mat() - b.mat() * sbasis[t]);
    for (std::size_t t = 0; t < m; ++t)
      for (std::size_t u = t; u < m; ++u) {
        const double v = frob_inner(lcols[t], lcols[u]);
        g_mat(t, u) += v;
        if (u != t) g_mat(u, t) += v;
      }
  }

  const SymEigen ge = sym_eigen(g_mat);
  const double gmax = std::max(1.0, std::abs(ge.values[0]));
  std::vector<Vec> kernel;
  for (std::size_t t = 0; t < m; ++t)
    if (std::abs(ge.values[t]) <= 1e-10 * gmax) kernel.push_back(ge.vectors.col(t));

  // The kernel always contains the identity; an empty kernel would mean a
  // broken eigen-solve, in which case the coarsest decomposition is the only
  // safe answer.
  std::mt19937_64 rng(0x5851f42d4c957f2dULL);
  if (kernel.empty()) {
    std::vector<int> whole(n);
    std::iota(whole.begin(), whole.end(), 0);
    return {whole};
  }

  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat x(n, n);
    for (const auto& kvec : kernel) {
      const double c = 2.0 * uniform01(rng()) - 1.0;
      for (std::size_t t = 0; t < m; ++t) {
        if (kvec[t] == 0.0) continue;
        x += (c * kvec[t]) * sbasis[t];
      }
    }
    // Exact symmetry for the eigensolver.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        x(i, j) = x(j, i) = 0.5 * (x(i, j) + x(j, i));

    const SymEigen xe = sym_eigen(x);
    const double spread = std::max(1.0, std::abs(xe.values[0]) +
                                            std::abs(xe.values[n - 1]));
    const auto groups = cluster_indices(xe.values, 1e-6 * spread);

    // Verify invariance: conjugated basis elements must not couple distinct
    // eigenvalue clusters.
    std::vector<int> group_of(n);
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
      for (int idx : groups[gi]) group_of[idx] = static_cast<int>(gi);
    double cross = 0.0;
    for (const auto& b : basis.elements) {
      const Mat bc = transpose(xe.vectors) * b.mat() * xe.vectors;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (group_of[i] != group_of[j])
            cross = std::max(cross, std::abs(bc(i, j)));
    }
    if (cross <= tol) return groups;
  }

  // Non-generic draw eight times in a row is effectively impossible; fall
  // back to the coarsest decomposition, which is always invariant.
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  return {all};
}

Mat polar_factor(const Mat& a) {
  require(a.rows() == a.cols(), "polar_factor needs a square matrix");
  const std::size_t n = a.rows();
  const Mat s = transpose(a) * a;
  const SymEigen es = sym_eigen(0.5 * (s + transpose(s)));
  Mat isqrt(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    require(es.values[i] > 0.0, "polar_factor of a rank-deficient matrix");
    const double w = 1.0 / std::sqrt(es.values[i]);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        isqrt(r, c) += w * es.vectors(r, i) * es.vectors(c, i);
  }
  return a * isqrt;
}

SkewEndo rotation_log(const Mat& q) {
  require(q.rows() == q.cols(), "rotation_log needs a square matrix");
  const std::size_t n = q.rows();
  const Mat qtq = transpose(q) * q;
  if (max_abs(qtq - Mat::identity(n)) > 1e-6)
    throw ContractViolation("rotation_log input is not orthogonal");
  if (determinant(q) < 0.0)
    throw ContractViolation("rotation_log input has determinant -1");

  // Q commutes with C = (Q + Q^T)/2, whose eigenspaces group the rotation
  // planes by angle: on an eigenspace with eigenvalue cos(t), the skew part
  // K of Q restricted there satisfies K K^T = sin(t)^2 id, so the log of the
  // restriction is (t / sin t) K.
  Mat c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = 0.5 * (q(i, j) + q(j, i));
  const SymEigen ce = sym_eigen(c);
  const auto groups = cluster_indices(ce.values, 1e-8);

  Mat s(n, n);
  for (const auto& grp : groups) {
    const std::size_t d = grp.size();
    Mat u(n, d);
    double cos_mean = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      u.set_col(k, ce.vectors.col(grp[k]));
      cos_mean += ce.values[grp[k]];
    }
    cos_mean /= static_cast<double>(d);
    const double cv = std::clamp(cos_mean, -1.0, 1.0);
    if (cv <= -1.0 + 1e-9)
      throw ContractViolation("rotation_log needs all angles < pi");
    const Mat qv = transpose(u) * q * u;
    Mat k = skew_part(qv);
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cv * cv));
    double factor = 1.0;  // t/sin(t) -> 1 as t -> 0
    if (sin_t > 1e-8) factor = std::acos(cv) / sin_t;
    k *= factor;
    s += u * k * transpose(u);
  }
  return SkewEndo(skew_part(s));
}

Mat mat_exp(const SkewEndo& s) {
  const std::size_t n = s.dim();
  Mat t = s.mat();
  int squarings = 0;
  double scale = frobenius(t);
  while (scale > 0.25 && squarings < 64) {
    t *= 0.5;
    scale *= 0.5;
    ++squarings;
  }
  Mat result = Mat::identity(n);
  Mat term = Mat::identity(n);
  for (int k = 1; k <= 16; ++k) {
    term = (1.0 / static_cast<double>(k)) * (term * t);
    result += term;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

double uniform01(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

}  // namespace holosurf
