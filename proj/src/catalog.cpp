#include "holosurf/catalog.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <utility>

namespace holosurf {

namespace {

std::string text(const char* fmt, ...) {
  char buf[160];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

// Nested angular chart of the unit m-sphere: out[i] = cos(a_i) times the
// running product of sines, out[m] = the full product.  mirror negates the
// last coordinate; the product factors use it to keep the induced normal
// orientation (and with it the sign of the spectrum) independent of the
// factor dimensions.
void sphere_point(const Vec& u, int offset, int m, bool mirror, double scale,
                  Vec& out, int out_offset) {
  double run = scale;
  for (int i = 0; i < m; ++i) {
    const double a = u[static_cast<std::size_t>(offset + i)];
    out[static_cast<std::size_t>(out_offset + i)] = run * std::cos(a);
    run *= std::sin(a);
  }
  out[static_cast<std::size_t>(out_offset + m)] = mirror ? -run : run;
}

Box angular_box(int n) {
  return Box{std::vector<double>(static_cast<std::size_t>(n), 0.35),
             std::vector<double>(static_cast<std::size_t>(n), 1.25)};
}

Box centered_box(int n, double half) {
  return Box{std::vector<double>(static_cast<std::size_t>(n), -half),
             std::vector<double>(static_cast<std::size_t>(n), half)};
}

BuiltChart build_clifford(const FamilySpec& spec) {
  const int n = spec.n, k = spec.k;
  const double nu = spec.nu;
  check(nu > 0.0, "clifford_product needs nu > 0");
  check(k >= 1 && k <= n - 1,
        text("k must lie in [1, n-1] = [1, %d]; got %d", n - 1, k));
  const double cap = 1.0 / std::sqrt(nu);
  check(spec.r > 0.0 && spec.r < cap,
        text("r must lie in (0, 1/sqrt(nu)) = (0, %g); got %g", cap, spec.r));
  const double r = spec.r;
  const double s = std::sqrt(1.0 / nu - r * r);
  const bool mirror = ((n - k) % 2) == 1;

  auto eval = [n, k, r, s, mirror](const Vec& u) {
    Vec out(static_cast<std::size_t>(n) + 2);
    sphere_point(u, 0, k, false, r, out, 0);
    sphere_point(u, k, n - k, mirror, s, out, k + 1);
    return out;
  };
  ImmersionChart chart(n, AmbientModel::make(nu, n), angular_box(n), eval,
                       text("clifford_product(n=%d,k=%d,", n, k) +
                           text("nu=%g,", nu) + text("r=%g)", r));

  const double lam = std::sqrt(nu) * s / r;
  const double mu = -std::sqrt(nu) * r / s;
  ExpectedOutcome ex;
  ex.clusters = {{lam, k}, {mu, n - k}};
  ex.factor_curvatures = {1.0 / (r * r), 1.0 / (s * s)};
  ex.has_factor_curvatures = true;
  if (k > 1 && k < n - 1) {
    ex.kind = VerdictKind::PRODUCT_SO_K_SO_NK;
    ex.k = k;
  } else {
    ex.kind = VerdictKind::SO_N_MINUS_1;
    ex.k = n - 1;
  }
  ex.note = "product of round factors; curvatures sqrt(nu) s/r and "
            "-sqrt(nu) r/s from the explicit embedding";
  return {std::move(chart), std::move(ex)};
}

BuiltChart build_geodesic_sphere(const FamilySpec& spec) {
  const int n = spec.n;
  const double nu = spec.nu;
  const bool spherical = spec.family == Family::geodesic_sphere_S;
  if (spherical) {
    check(nu > 0.0, "geodesic_sphere_S needs nu > 0");
    const double cap = std::acos(-1.0) / std::sqrt(nu);
    check(spec.rho > 0.0 && spec.rho < cap,
          text("rho must lie in (0, pi/sqrt(nu)) = (0, %g); got %g", cap,
               spec.rho));
  } else {
    check(nu < 0.0, "geodesic_sphere_H needs nu < 0");
    check(spec.rho > 0.0, text("rho must be positive; got %g", spec.rho));
  }
  const double root = std::sqrt(std::abs(nu));
  const double scale = 1.0 / root;
  const double ang = spec.rho * root;
  const double c0 = spherical ? std::cos(ang) : std::cosh(ang);
  const double c1 = spherical ? std::sin(ang) : std::sinh(ang);
  // mirrored on even n so the normal points along decreasing radius and the
  // spectrum is the positive branch
  const bool mirror = (n % 2) == 0;

  auto eval = [n, scale, c0, c1, mirror](const Vec& u) {
    Vec out(static_cast<std::size_t>(n) + 2);
    out[0] = scale * c0;
    sphere_point(u, 0, n, mirror, scale * c1, out, 1);
    return out;
  };
  ImmersionChart chart(
      n, AmbientModel::make(nu, n), angular_box(n), eval,
      text(spherical ? "geodesic_sphere_S(n=%d," : "geodesic_sphere_H(n=%d,",
           n) +
          text("nu=%g,", nu) + text("rho=%g)", spec.rho));

  const double lam = spherical ? root * (std::cos(ang) / std::sin(ang))
                               : root * (std::cosh(ang) / std::sinh(ang));
  ExpectedOutcome ex;
  ex.kind = VerdictKind::FULL_SO_N;
  ex.clusters = {{lam, n}};
  ex.note = spherical
                ? "umbilical with curvature sqrt(nu) cot(sqrt(nu) rho)"
                : "umbilical with curvature sqrt(-nu) coth(sqrt(-nu) rho)";
  return {std::move(chart), std::move(ex)};
}

BuiltChart build_horosphere(const FamilySpec& spec) {
  const int n = spec.n;
  check(spec.nu < 0.0, "horosphere needs nu < 0");
  const double scale = 1.0 / std::sqrt(-spec.nu);

  auto eval = [n, scale](const Vec& u) {
    double q = 0.0;
    for (int i = 0; i < n; ++i)
      q += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    Vec out(static_cast<std::size_t>(n) + 2);
    out[0] = scale * (1.0 + 0.5 * q);
    for (int i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i) + 1] =
          scale * u[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(n) + 1] = scale * 0.5 * q;
    return out;
  };
  ImmersionChart chart(n, AmbientModel::make(spec.nu, n), centered_box(n, 0.8),
                       eval,
                       text("horosphere(n=%d,", n) + text("nu=%g)", spec.nu));

  ExpectedOutcome ex;
  ex.kind = VerdictKind::TRIVIAL;
  ex.clusters = {{std::sqrt(-spec.nu), n}};
  ex.note = "umbilical with unit-scaled principal curvatures; intrinsically "
            "flat, so transport is trivial";
  return {std::move(chart), std::move(ex)};
}

BuiltChart build_equidistant(const FamilySpec& spec, bool geodesic_leaf) {
  const int n = spec.n;
  check(spec.nu < 0.0, geodesic_leaf ? "totally_geodesic with nu >= 0 uses "
                                       "the spherical equator form"
                                     : "equidistant needs nu < 0");
  const double t = geodesic_leaf ? 0.0 : spec.t;
  check(t >= 0.0, text("t must be nonnegative; got %g", t));
  const double root = std::sqrt(-spec.nu);
  const double scale = 1.0 / root;
  const double ch = std::cosh(t * root), sh = std::sinh(t * root);

  // u[0] enters reflected; this fixes the normal toward the leaf and keeps
  // the spectrum on the positive branch for every n
  auto eval = [n, scale, ch, sh](const Vec& u) {
    double q = 0.0;
    for (int i = 0; i < n; ++i)
      q += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    Vec out(static_cast<std::size_t>(n) + 2);
    out[0] = scale * ch * std::sqrt(1.0 + q);
    out[1] = -scale * ch * u[0];
    for (int i = 1; i < n; ++i)
      out[static_cast<std::size_t>(i) + 1] =
          scale * ch * u[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(n) + 1] = scale * sh;
    return out;
  };
  ImmersionChart chart(
      n, AmbientModel::make(spec.nu, n), centered_box(n, 0.8), eval,
      geodesic_leaf
          ? text("totally_geodesic(n=%d,", n) + text("nu=%g)", spec.nu)
          : text("equidistant(n=%d,", n) + text("nu=%g,", spec.nu) +
                text("t=%g)", spec.t));

  ExpectedOutcome ex;
  ex.kind = VerdictKind::FULL_SO_N;
  ex.clusters = {{root * (sh / ch), n}};
  ex.note = geodesic_leaf
                ? "totally geodesic leaf; curvature equals the model's"
                : "umbilical with curvature sqrt(-nu) tanh(sqrt(-nu) t)";
  return {std::move(chart), std::move(ex)};
}

BuiltChart build_totally_geodesic(const FamilySpec& spec) {
  check(spec.nu != 0.0, "totally_geodesic needs nu != 0");
  if (spec.nu < 0.0) return build_equidistant(spec, true);

  const int n = spec.n;
  const double scale = 1.0 / std::sqrt(spec.nu);
  auto eval = [n, scale](const Vec& u) {
    Vec out(static_cast<std::size_t>(n) + 2);
    out[0] = 0.0;
    sphere_point(u, 0, n, false, scale, out, 1);
    return out;
  };
  ImmersionChart chart(n, AmbientModel::make(spec.nu, n), angular_box(n), eval,
                       text("totally_geodesic(n=%d,", n) +
                           text("nu=%g)", spec.nu));
  ExpectedOutcome ex;
  ex.kind = VerdictKind::FULL_SO_N;
  ex.clusters = {{0.0, n}};
  ex.note = "equatorial sphere; curvature equals the model's";
  return {std::move(chart), std::move(ex)};
}

BuiltChart build_graph_generic(const FamilySpec& spec) {
  const int n = spec.n;
  check(spec.nu >= 0.0, "graph_generic needs nu >= 0");
  check(spec.amplitude > 0.0,
        text("amplitude must be positive; got %g", spec.amplitude));
  check(spec.frequency > 0.0,
        text("frequency must be positive; got %g", spec.frequency));
  const double amp = spec.amplitude, freq = spec.frequency;

  if (spec.nu == 0.0) {
    // graph over a flat base, for smoke runs and the flat-model paths
    auto eval = [n, amp, freq](const Vec& u) {
      Vec out(static_cast<std::size_t>(n) + 1);
      double prod = amp;
      for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
        prod *= std::sin(freq * u[static_cast<std::size_t>(i)]);
      }
      out[static_cast<std::size_t>(n)] = prod;
      return out;
    };
    ImmersionChart chart(n, AmbientModel::make(0.0, n), angular_box(n), eval,
                         text("graph_generic(n=%d,nu=0,", n) +
                             text("amplitude=%g)", amp));
    ExpectedOutcome ex;
    ex.kind = VerdictKind::FULL_SO_N;
    ex.note = "generic graph; spectrum varies across the chart";
    return {std::move(chart), std::move(ex)};
  }

  const double scale = 1.0 / std::sqrt(spec.nu);
  // wobbling latitude profile over a rotational orbit; the (n-1, 1)
  // spectrum shape of a product without any of its parallelism
  auto eval = [n, scale, amp, freq](const Vec& u) {
    const double t = u[0];
    const double alpha = 0.9 + amp * std::sin(freq * t);
    Vec out(static_cast<std::size_t>(n) + 2);
    out[0] = scale * std::cos(alpha) * std::cos(t);
    out[1] = scale * std::cos(alpha) * std::sin(t);
    sphere_point(u, 1, n - 1, false, scale * std::sin(alpha), out, 2);
    return out;
  };
  Box box = angular_box(n);
  box.lo[0] = 0.3;
  box.hi[0] = 1.2;
  ImmersionChart chart(n, AmbientModel::make(spec.nu, n), std::move(box), eval,
                       text("graph_generic(n=%d,", n) +
                           text("nu=%g,", spec.nu) +
                           text("amplitude=%g)", amp));
  ExpectedOutcome ex;
  ex.kind = VerdictKind::FULL_SO_N;
  ex.note = "generic rotational graph; spectrum varies across the chart";
  return {std::move(chart), std::move(ex)};
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::clifford_product:
      return "clifford_product";
    case Family::geodesic_sphere_S:
      return "geodesic_sphere_S";
    case Family::geodesic_sphere_H:
      return "geodesic_sphere_H";
    case Family::horosphere:
      return "horosphere";
    case Family::equidistant:
      return "equidistant";
    case Family::totally_geodesic:
      return "totally_geodesic";
    case Family::graph_generic:
      return "graph_generic";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (Family f : all_families())
    if (name == family_name(f)) return f;
  throw ValidationError("unknown family '" + name + "'");
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families{
      Family::clifford_product, Family::geodesic_sphere_S,
      Family::geodesic_sphere_H, Family::horosphere,
      Family::equidistant,       Family::totally_geodesic,
      Family::graph_generic};
  return families;
}

BuiltChart build(const FamilySpec& spec, bool smoke) {
  check(spec.n >= (smoke ? 2 : 3),
        smoke ? text("n must be at least 2; got %d", spec.n)
              : text("n must be at least 3; got %d", spec.n));
  if (spec.family != Family::graph_generic)
    check(spec.nu != 0.0, "nu must be nonzero for this family");

  BuiltChart built = [&] {
    switch (spec.family) {
      case Family::clifford_product:
        return build_clifford(spec);
      case Family::geodesic_sphere_S:
      case Family::geodesic_sphere_H:
        return build_geodesic_sphere(spec);
      case Family::horosphere:
        return build_horosphere(spec);
      case Family::equidistant:
        return build_equidistant(spec, false);
      case Family::totally_geodesic:
        return build_totally_geodesic(spec);
      case Family::graph_generic:
        return build_graph_generic(spec);
    }
    throw ValidationError("unknown family");
  }();

  if (spec.n < 3) {
    built.expected = ExpectedOutcome{};
    built.expected.note =
        "below the classification dimension; expectation withheld";
  }
  return built;
}

}  // namespace holosurf
