#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "holosurf/splitting.hpp"
#include "support.hpp"

using namespace holosurf;
using testsupport::clifford_chart;
using testsupport::geodesic_sphere_chart;
using testsupport::horosphere_chart;
using testsupport::wavy_rotational_chart;

namespace {

// FramedPoint with only the data the threshold logic consumes; keeps the
// synthetic-spectrum tests independent of any chart.
FramedPoint synthetic_point(Vec lambda) {
  FramedPoint fp;
  const int n = static_cast<int>(lambda.size());
  fp.g = Mat::identity(n);
  fp.lambda = std::move(lambda);
  return fp;
}

std::vector<FramedPoint> sample(const ImmersionChart& chart,
                                const std::vector<Vec>& us) {
  std::vector<FramedPoint> pts;
  pts.reserve(us.size());
  for (const auto& u : us) pts.push_back(framed_point(chart, u, 1e-4));
  return pts;
}

}  // namespace

TEST_CASE("cluster profile of a product hypersurface has two blocks") {
  const auto chart = clifford_chart(4, 2, 0.6);
  const auto fp = framed_point(chart, Vec{0.7, 0.8, 0.9, 1.0}, 1e-4);
  const auto cl = cluster_profile(fp);
  REQUIRE(cl.size() == 2);
  CHECK(cl[0].multiplicity == 2);
  CHECK(cl[1].multiplicity == 2);
  CHECK(std::abs(cl[0].value - 4.0 / 3.0) < 1e-5);
  CHECK(std::abs(cl[1].value + 3.0 / 4.0) < 1e-5);
}

TEST_CASE("cluster profile of an umbilical hypersurface is a single block") {
  const auto chart = geodesic_sphere_chart(3, std::acos(-1.0) / 3.0);
  const auto fp = framed_point(chart, Vec{0.7, 0.8, 0.9}, 1e-4);
  const auto cl = cluster_profile(fp);
  REQUIRE(cl.size() == 1);
  CHECK(cl[0].multiplicity == 3);
  CHECK(std::abs(cl[0].value - 1.0 / std::tan(std::acos(-1.0) / 3.0)) < 1e-5);
}

TEST_CASE("clustering width merges near-degenerate eigenvalues") {
  const auto fp = synthetic_point({1.00005, 1.0, -1.0});
  const auto merged = cluster_profile(fp, 2e-4);
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].multiplicity == 2);
  CHECK(std::abs(merged[0].value - 1.000025) < 1e-12);
  CHECK(merged[1].multiplicity == 1);
  CHECK(std::abs(merged[1].value + 1.0) < 1e-12);

  const auto split = cluster_profile(fp, 1e-5);
  CHECK(split.size() == 3);
}

TEST_CASE("product of two spheres is certified as case a") {
  const auto chart = clifford_chart(4, 2, 0.6);
  const auto pts = sample(chart, {Vec{0.7, 0.8, 0.9, 1.0},
                                  Vec{0.5, 0.6, 1.0, 0.8},
                                  Vec{0.9, 1.1, 0.6, 0.7}});
  const double tol = 1e-3 * (1.0 + 16.0 / 9.0);
  const auto rep = check_case_a(pts, 1.0, tol, &chart, 1e-3);

  CHECK(rep.split_case == SplitCase::a);
  CHECK(rep.k == 2);
  CHECK(std::abs(rep.Lambda - 4.0 / 3.0) < 1e-6);
  CHECK(std::abs(rep.Theta + 3.0 / 4.0) < 1e-6);
  CHECK(rep.relation_residual <= tol);
  CHECK(rep.relation_residual < 1e-6);
  CHECK(rep.constancy_residual < 1e-6);
  CHECK(rep.cross_curvature_residual < 1e-6);
  CHECK(rep.parallelism_residual < 1e-8);
  // predicted factor curvatures are 1/r^2 and 1/s^2
  CHECK(std::abs(rep.factor_curvatures.first - 25.0 / 9.0) < 1e-6);
  CHECK(std::abs(rep.factor_curvatures.second - 25.0 / 16.0) < 1e-6);
  CHECK(rep.samples.size() == pts.size());
  CHECK(std::abs(rep.Lambda - rep.Theta) > 1e-4);
}

TEST_CASE("case a rejects a single-cluster spectrum outright") {
  const auto chart = geodesic_sphere_chart(4, 0.9);
  const auto pts = sample(chart, {Vec{0.7, 0.8, 0.9, 1.0}});
  CHECK_THROWS_AS(check_case_a(pts, 1.0, 1e-3, &chart, 1e-3), StructuralError);
  CHECK_THROWS_AS(check_case_b(pts, 1.0, 1e-3, &chart, 1e-3), StructuralError);
}

TEST_CASE("case a rejects points that disagree about the profile") {
  const auto c42 = clifford_chart(4, 2, 0.6);
  const auto c43 = clifford_chart(4, 3, 0.6, true);
  std::vector<FramedPoint> pts{framed_point(c42, Vec{0.7, 0.8, 0.9, 1.0}, 1e-4),
                               framed_point(c43, Vec{0.7, 0.8, 0.9, 1.0}, 1e-4)};
  CHECK_THROWS_AS(check_case_a(pts, 1.0, 1e-3, nullptr, 1e-3), StructuralError);
}

TEST_CASE("case a fails on a spectrum violating the product relation") {
  // nu + Lambda Theta = 1 + 1.9 * (-0.5) = 0.05
  std::vector<FramedPoint> pts{synthetic_point({1.9, 1.9, -0.5, -0.5})};
  const auto rep = check_case_a(pts, 1.0, 1e-3);
  CHECK(rep.split_case == SplitCase::none);
  CHECK(std::abs(rep.relation_residual - 0.05) < 1e-12);
}

TEST_CASE("case a without a chart reports unchecked parallelism") {
  // nu + 2 * (-0.5) = 0 exactly
  std::vector<FramedPoint> pts{synthetic_point({2.0, 2.0, -0.5, -0.5})};
  const auto rep = check_case_a(pts, 1.0, 1e-3);
  CHECK(rep.split_case == SplitCase::a);
  CHECK(rep.Lambda == 2.0);
  CHECK(rep.Theta == -0.5);
  CHECK(rep.diagnostic.find("no chart supplied") != std::string::npos);
}

TEST_CASE("sphere times circle is certified as case b") {
  const auto chart = clifford_chart(4, 3, 0.6, true);
  const auto pts = sample(chart, {Vec{0.7, 0.8, 0.9, 1.0},
                                  Vec{0.5, 0.6, 1.0, 0.8}});
  const double tol = 1e-3 * (1.0 + 16.0 / 9.0);
  const auto rep = check_case_b(pts, 1.0, tol, &chart, 1e-3);

  CHECK(rep.split_case == SplitCase::b);
  CHECK(rep.k == 3);
  CHECK(std::abs(rep.Lambda - 4.0 / 3.0) < 1e-6);
  CHECK(std::abs(rep.Theta + 3.0 / 4.0) < 1e-6);
  CHECK(rep.relation_residual <= tol);
  CHECK(rep.constancy_residual < 1e-6);
  CHECK(std::abs(rep.gamma_aan) < 1e-6);
  CHECK(rep.en_lambda < 1e-6);
  CHECK(std::abs(rep.factor_curvatures.first - 25.0 / 9.0) < 1e-6);
}

TEST_CASE("case b needs the chart once the structure looks right") {
  const auto chart = clifford_chart(4, 3, 0.6, true);
  const auto pts = sample(chart, {Vec{0.7, 0.8, 0.9, 1.0}});
  CHECK_THROWS_AS(check_case_b(pts, 1.0, 1e-3, nullptr, 1e-3),
                  ContractViolation);
}

TEST_CASE("a wavy rotational graph is refused with the SO(n) diagnostic") {
  const auto chart = wavy_rotational_chart(3);
  const auto pts = sample(chart, {Vec{0.6, 0.8, 0.9}, Vec{0.9, 0.6, 1.1}});
  const double tol = 1e-3 * (1.0 + 4.0);
  const auto rep = check_case_b(pts, 1.0, tol, &chart, 1e-3);

  CHECK(rep.split_case == SplitCase::none);
  CHECK(std::abs(rep.gamma_aan) > 0.1);
  CHECK(rep.diagnostic.find("full SO(n) expected") != std::string::npos);
}

TEST_CASE("the case b consistency identity ties both factor curvatures") {
  const auto chart = clifford_chart(4, 3, 0.6, true);
  const auto pts = sample(chart, {Vec{0.7, 0.8, 0.9, 1.0}});
  const double nu = 1.0;
  const auto rep = check_case_b(pts, nu, 1e-3 * (1.0 + 16.0 / 9.0), &chart, 1e-3);
  REQUIRE(rep.split_case == SplitCase::b);

  // with Theta forced onto the relation the two expressions agree exactly
  const double L = rep.Lambda;
  const double theta_hat = -nu / L;
  const double lhs = nu + theta_hat * theta_hat;
  const double rhs = (nu / (L * L)) * (nu + L * L);
  CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));

  // the measured Theta satisfies it up to the certification tolerance
  CHECK(std::abs(rep.factor_curvatures.second - rhs) < 1e-4);
}

TEST_CASE("the product relation holds across the radius family") {
  for (double r = 0.25; r < 0.9; r += 0.1) {
    const auto chart = clifford_chart(4, 2, r);
    const auto fp = framed_point(chart, Vec{0.7, 0.8, 0.9, 1.0}, 1e-4);
    const auto cl = cluster_profile(fp);
    REQUIRE(cl.size() == 2);
    CHECK(std::abs(cl[0].value * cl[1].value + 1.0) < 1e-4);
  }
}

TEST_CASE("flatness check") {
  SUBCASE("horosphere is flat") {
    const auto chart = horosphere_chart(4);
    const auto fp = framed_point(chart, Vec{0.1, -0.2, 0.3, 0.0}, 1e-4);
    const auto rep = flatness_check(fp, -1.0, 1e-3);
    CHECK(rep.flat);
    CHECK(rep.diagnostic.find("impossible") == std::string::npos);
  }
  SUBCASE("a curved product is not flat") {
    const auto chart = clifford_chart(4, 2, 0.6);
    const auto fp = framed_point(chart, Vec{0.7, 0.8, 0.9, 1.0}, 1e-4);
    CHECK_FALSE(flatness_check(fp, 1.0, 1e-3).flat);
  }
  SUBCASE("a totally geodesic equator is not flat") {
    const auto chart = geodesic_sphere_chart(3, std::acos(-1.0) / 2.0);
    const auto fp = framed_point(chart, Vec{0.7, 0.8, 0.9}, 1e-4);
    CHECK_FALSE(flatness_check(fp, 1.0, 1e-3).flat);
  }
  SUBCASE("a flat verdict under positive ambient curvature is called out") {
    const auto fp = synthetic_point({0.0, 0.0, 0.0});
    const auto rep = flatness_check(fp, 1.0, 1.5);
    CHECK(rep.flat);
    CHECK(rep.diagnostic.find("impossible") != std::string::npos);
  }
  SUBCASE("dimension below three is rejected") {
    const auto fp = synthetic_point({1.0, -1.0});
    CHECK_THROWS_AS(flatness_check(fp, 1.0, 1e-3), ContractViolation);
  }
}
