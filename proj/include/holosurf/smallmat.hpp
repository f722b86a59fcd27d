#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "holosurf/common.hpp"

// Dense kernel for the small (n <= 16) vectors, matrices and skew
// endomorphisms the rest of the library is built from.  Deliberately
// self-contained: the sizes involved never justify an external solver and
// keeping the arithmetic local makes the bracket/closure code auditable.

namespace holosurf {

class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n, double fill = 0.0) : e_(n, fill) {}
  Vec(std::initializer_list<double> xs) : e_(xs) {}

  std::size_t size() const { return e_.size(); }
  double& operator[](std::size_t i) { return e_[i]; }
  double operator[](std::size_t i) const { return e_[i]; }
  double* data() { return e_.data(); }
  const double* data() const { return e_.data(); }

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);

 private:
  std::vector<double> e_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec a);
double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);

// Row-major dense matrix.  Mostly square in this library, but jets and
// frames occasionally want rectangular storage.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), e_(rows * cols, fill) {}

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return e_[i * cols_ + j];
  }

  Vec col(std::size_t j) const;
  Vec row(std::size_t i) const;
  void set_col(std::size_t j, const Vec& v);

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> e_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(double s, Mat a);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& x);
Mat transpose(const Mat& a);
double frobenius(const Mat& a);
double max_abs(const Mat& a);
double max_abs(const Vec& a);

// Gaussian elimination with partial pivoting; throws ContractViolation on
// singular input.
Mat inverse(const Mat& a);
double determinant(const Mat& a);

// Skew part (a - a^T)/2.  Exact entrywise antisymmetry in floating point.
Mat skew_part(const Mat& a);

// An element of so(n): the matrix of a skew endomorphism in an orthonormal
// frame.  mat + mat^T must vanish entrywise to within 1e-12.
class SkewEndo {
 public:
  explicit SkewEndo(Mat m);
  // Same endomorphism expressed in a frame with Gram matrix `metric`; the
  // skewness condition then reads m^T metric + metric m = 0.
  SkewEndo(Mat m, const Mat& metric);

  const Mat& mat() const { return m_; }
  std::size_t dim() const { return m_.rows(); }

 private:
  Mat m_;
};

// z |-> g(y,z) x - g(x,z) y.  Antisymmetric in (x, y); skew with respect
// to g.  The two-argument overload assumes an orthonormal frame (g = id).
SkewEndo wedge(const Vec& x, const Vec& y);
SkewEndo wedge(const Vec& x, const Vec& y, const Mat& g);

// Matrix of e_i ^ e_j for the standard basis, a convenience used all over
// the curvature code.
SkewEndo wedge_unit(std::size_t i, std::size_t j, std::size_t n);

SkewEndo bracket(const SkewEndo& a, const SkewEndo& b);

// Inner product -tr(ab)/2 on so(n); elementary wedges e_i ^ e_j have unit
// norm under it.
double skew_inner(const SkewEndo& a, const SkewEndo& b);
double skew_norm(const SkewEndo& a);

struct SymEigen {
  Vec values;   // descending
  Mat vectors;  // columns, orthonormal, a * v_i = values_i * v_i
};

// Cyclic Jacobi iteration.  Input must be symmetric to 1e-9 relative.
SymEigen sym_eigen(const Mat& a);

struct SpanBasis {
  std::vector<SkewEndo> elements;  // pairwise orthonormal under skew_inner
  std::size_t dim() const { return elements.size(); }
};

// Smallest Lie algebra containing the generators: worklist of pending
// brackets with Gram-Schmidt admission.  Deterministic processing order
// (generator order, then FIFO).  A candidate joins the basis when its
// component orthogonal to the current span has norm > tol.
SpanBasis closure_under_brackets(const std::vector<SkewEndo>& generators,
                                 double tol);

// Finest orthogonal decomposition of R^n into subspaces invariant (within
// tol) under every basis element, reported as index sets of an adapted
// orthonormal frame.  The index sets partition {0..n-1}.
std::vector<std::vector<int>> invariant_blocks(const SpanBasis& basis,
                                               std::size_t n, double tol);

// Orthogonal polar factor a (a^T a)^(-1/2), the nearest orthogonal matrix
// in Frobenius norm.  Throws ContractViolation on rank-deficient input.
Mat polar_factor(const Mat& a);

// Principal logarithm of a rotation with all angles < pi.  Orthogonality is
// checked to 1e-6; the result satisfies mat_exp(log) = q to 1e-9.
SkewEndo rotation_log(const Mat& q);

// exp of a skew matrix by scaling and squaring; returns a rotation.
Mat mat_exp(const SkewEndo& s);

// Deterministic helpers used wherever reproducible pseudo-randomness is
// needed (library-internal sampling and tests).  uniform01 maps the raw
// 64-bit stream to [0,1) identically on every platform.
double uniform01(std::uint64_t raw);

}  // namespace holosurf
