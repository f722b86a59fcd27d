#include "holosurf/modelspace.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace holosurf {

AmbientModel AmbientModel::make(double nu, int n) {
  if (n < 1) throw ContractViolation("ambient model needs n >= 1");
  AmbientModel m;
  m.nu = nu;
  m.ambient_dim = n + 1;
  m.embedding_dim = (nu == 0.0) ? n + 1 : n + 2;
  m.signature.assign(static_cast<std::size_t>(m.embedding_dim), 1.0);
  if (nu < 0.0) m.signature[0] = -1.0;  // Minkowski, timelike axis first
  return m;
}

double AmbientModel::form(const Vec& x, const Vec& y) const {
  if (x.size() != signature.size() || y.size() != signature.size())
    throw ContractViolation("vector size does not match the embedding");
  double s = 0.0;
  for (std::size_t i = 0; i < signature.size(); ++i)
    s += signature[i] * x[i] * y[i];
  return s;
}

double AmbientModel::constraint_residual(const Vec& x) const {
  if (nu == 0.0) return 0.0;
  return std::abs(form(x, x) - 1.0 / nu);
}

double Box::max_extent() const {
  double m = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) m = std::max(m, hi[i] - lo[i]);
  return m;
}

bool Box::contains(const Vec& u, double margin) const {
  if (u.size() != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (u[i] < lo[i] + margin || u[i] > hi[i] - margin) return false;
  return true;
}

ImmersionChart::ImmersionChart(int n, AmbientModel model, Box domain,
                               EvalFn eval, std::string label)
    : n_(n),
      model_(std::move(model)),
      domain_(std::move(domain)),
      eval_(std::move(eval)),
      label_(std::move(label)) {
  if (n_ < 1) throw ContractViolation("chart needs n >= 1");
  if (domain_.dim() != n_)
    throw ContractViolation("chart domain dimension does not match n");
  for (int i = 0; i < n_; ++i)
    if (!(domain_.lo[i] < domain_.hi[i]))
      throw ContractViolation("chart domain box is empty");
}

Vec ImmersionChart::operator()(const Vec& u) const {
  if (static_cast<int>(u.size()) != n_)
    throw ContractViolation("chart parameter dimension mismatch");
  Vec x = eval_(u);
  if (static_cast<int>(x.size()) != model_.embedding_dim)
    throw InvalidChartError("chart output does not match the embedding dimension");
  return x;
}

const Vec& ChartJet::d2(int i, int j) const {
  if (i > j) std::swap(i, j);
  const int n = static_cast<int>(d1.size());
  const int idx = i * n - i * (i - 1) / 2 + (j - i);
  return d2_packed[static_cast<std::size_t>(idx)];
}

namespace {

Vec shifted(const Vec& u, int axis, double delta) {
  Vec v = u;
  v[static_cast<std::size_t>(axis)] += delta;
  return v;
}

constexpr double kConstraintTol = 1e-8;
constexpr double kGramDetTol = 1e-10;

}  // namespace

ChartJet jet(const ImmersionChart& chart, const Vec& u, double h) {
  const int n = chart.n();
  if (static_cast<int>(u.size()) != n)
    throw ContractViolation("jet parameter dimension mismatch");
  if (!(h > 0.0)) throw ContractViolation("jet needs a positive step");

  // Collect every stencil offset first so a domain violation is reported
  // before any evaluation happens.
  std::vector<Vec> offsets;
  offsets.push_back(u);
  for (int i = 0; i < n; ++i) {
    offsets.push_back(shifted(u, i, +h));
    offsets.push_back(shifted(u, i, -h));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      offsets.push_back(shifted(shifted(u, i, +h), j, +h));
      offsets.push_back(shifted(shifted(u, i, +h), j, -h));
      offsets.push_back(shifted(shifted(u, i, -h), j, +h));
      offsets.push_back(shifted(shifted(u, i, -h), j, -h));
    }
  for (const auto& p : offsets)
    if (!chart.domain().contains(p))
      throw StencilDomainError("finite-difference stencil leaves the chart domain");

  const auto& model = chart.model();
  const auto eval = [&](const Vec& p) {
    Vec x = chart(p);
    if (model.constraint_residual(x) > kConstraintTol)
      throw InvalidChartError("chart violates the model constraint");
    return x;
  };

  ChartJet out;
  out.step = h;
  out.point = eval(u);

  std::vector<Vec> plus(n), minus(n);
  for (int i = 0; i < n; ++i) {
    plus[i] = eval(shifted(u, i, +h));
    minus[i] = eval(shifted(u, i, -h));
    Vec d = plus[i] - minus[i];
    d *= 1.0 / (2.0 * h);
    out.d1.push_back(std::move(d));
  }

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Vec d;
      if (i == j) {
        d = plus[i] + minus[i] - 2.0 * out.point;
        d *= 1.0 / (h * h);
      } else {
        const Vec pp = eval(shifted(shifted(u, i, +h), j, +h));
        const Vec pm = eval(shifted(shifted(u, i, +h), j, -h));
        const Vec mp = eval(shifted(shifted(u, i, -h), j, +h));
        const Vec mm = eval(shifted(shifted(u, i, -h), j, -h));
        d = (pp - pm) - (mp - mm);
        d *= 1.0 / (4.0 * h * h);
      }
      out.d2_packed.push_back(std::move(d));
    }

  // Rank check on the differential via the induced Gram matrix.
  Mat gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = model.form(out.d1[i], out.d1[j]);
  if (determinant(gram) <= kGramDetTol)
    throw InvalidChartError("chart differential is rank deficient");

  return out;
}

TangentNormalFrame tangent_normal_frame(const ImmersionChart& chart,
                                        const ChartJet& cj, int normal_sign) {
  if (normal_sign != 1 && normal_sign != -1)
    throw ContractViolation("normal_sign must be +1 or -1");
  const auto& model = chart.model();
  const int m = model.embedding_dim;

  // xi must be form-orthogonal to the position (nu != 0) and all d1;
  // equivalently Euclid-orthogonal to signature * v for those v.
  std::vector<Vec> constraints;
  if (model.nu != 0.0) constraints.push_back(cj.point);
  for (const auto& d : cj.d1) constraints.push_back(d);
  for (auto& c : constraints)
    for (int i = 0; i < m; ++i) c[static_cast<std::size_t>(i)] *= model.signature[static_cast<std::size_t>(i)];

  // Orthonormalize the constraint rows, then find the unique coordinate
  // direction completing them.
  std::vector<Vec> ortho;
  for (auto c : constraints) {
    const double orig = norm(c);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : ortho) c -= dot(c, b) * b;
    const double r = norm(c);
    if (r <= 1e-10 * std::max(1.0, orig))
      throw InvalidChartError("degenerate constraint set for the normal");
    c *= 1.0 / r;
    ortho.push_back(std::move(c));
  }
  if (static_cast<int>(ortho.size()) != m - 1)
    throw InvalidChartError("normal direction is not one-dimensional");

  Vec xi;
  bool found = false;
  for (int axis = 0; axis < m && !found; ++axis) {
    Vec c(static_cast<std::size_t>(m));
    c[static_cast<std::size_t>(axis)] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : ortho) c -= dot(c, b) * b;
    const double r = norm(c);
    if (r > 1e-6) {
      c *= 1.0 / r;
      xi = std::move(c);
      found = true;
    }
  }
  if (!found) throw InvalidChartError("failed to complete the normal direction");

  // Normalize in the model form; the normal of a spacelike hypersurface is
  // spacelike, so the square must come out positive.
  const double q = model.form(xi, xi);
  if (q <= 1e-12)
    throw InvalidChartError("normal direction is not spacelike");
  xi *= 1.0 / std::sqrt(q);

  // Orientation: (position if nu != 0, d1..., xi) positively oriented.
  Mat basis(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  int col = 0;
  if (model.nu != 0.0) basis.set_col(static_cast<std::size_t>(col++), cj.point);
  for (const auto& d : cj.d1) basis.set_col(static_cast<std::size_t>(col++), d);
  basis.set_col(static_cast<std::size_t>(col), xi);
  if (determinant(basis) < 0.0) xi *= -1.0;
  if (normal_sign < 0) xi *= -1.0;

  TangentNormalFrame frame;
  frame.tangent = cj.d1;
  frame.xi = std::move(xi);
  return frame;
}

}  // namespace holosurf
