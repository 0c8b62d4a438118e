#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "lsnn/problem.hpp"
#include "lsnn/quadrature.hpp"

using namespace lsnn;

TEST_CASE("domain mesh: unit square at h = 0.5") {
  DomainMesh mesh = build_domain_mesh(Box::unit_square(), 0.5);
  REQUIRE(mesh.size() == 4);
  CHECK(mesh.cell_weight == doctest::Approx(0.25).epsilon(1e-15));
  std::set<std::pair<double, double>> got, want = {
      {0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
  for (Eigen::Index i = 0; i < 4; ++i) got.insert({mesh.points(i, 0), mesh.points(i, 1)});
  CHECK(got == want);
}

TEST_CASE("domain mesh: counts and boundary avoidance") {
  DomainMesh fine = build_domain_mesh(Box::unit_square(), 0.01);
  CHECK(fine.size() == 10000);
  for (Eigen::Index i = 0; i < fine.size(); ++i) {
    CHECK(fine.points(i, 0) > 0.0);
    CHECK(fine.points(i, 0) < 1.0);
  }
  DomainMesh cube = build_domain_mesh(Box::unit_cube(), 0.5);
  CHECK(cube.size() == 8);
  CHECK(cube.cell_weight == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("domain mesh: non-divisible side is rejected") {
  CHECK_THROWS_AS(build_domain_mesh(Box::unit_square(), 0.3), std::invalid_argument);
  CHECK_THROWS_AS(build_domain_mesh(Box::unit_square(), -0.1), std::invalid_argument);
}

TEST_CASE("domain weights sum to the box volume") {
  for (double h : {0.5, 0.1, 0.02}) {
    DomainMesh mesh = build_domain_mesh(Box::square(0.0, 2.0), h);
    const double total = mesh.cell_weight * static_cast<double>(mesh.size());
    CHECK(std::abs(total - 4.0) <= 1e-12);
  }
}

TEST_CASE("integrate: exact on constants and affine integrands") {
  DomainMesh mesh = build_domain_mesh(Box::unit_square(), 0.02);
  CHECK(std::abs(integrate(mesh, [](const Vec&) { return 1.0; }) - 1.0) < 1e-12);
  CHECK(std::abs(integrate(mesh, [](const Vec& p) { return p[0]; }) - 0.5) < 1e-13);
}

TEST_CASE("integrate: composite midpoint error on x^2") {
  const double h = 0.01;
  DomainMesh mesh = build_domain_mesh(Box::unit_square(), h);
  const double got = integrate(mesh, [](const Vec& p) { return p[0] * p[0]; });
  // exact composite-midpoint value: 1/3 - h^2/12
  CHECK(std::abs(got - (1.0 / 3.0 - h * h / 12.0)) < 1e-12);
}

TEST_CASE("integrate: linearity") {
  DomainMesh mesh = build_domain_mesh(Box::unit_square(), 0.05);
  auto f1 = [](const Vec& p) { return p[0] * p[1]; };
  auto f2 = [](const Vec& p) { return std::sin(p[0]); };
  const double a = 2.5, b = -1.25;
  const double lhs = integrate(mesh, [&](const Vec& p) { return a * f1(p) + b * f2(p); });
  const double rhs = a * integrate(mesh, f1) + b * integrate(mesh, f2);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("integrate: non-finite integrand is reported with the node") {
  DomainMesh mesh = build_domain_mesh(Box::unit_square(), 0.5);
  CHECK_THROWS_WITH_AS(
      integrate(mesh, [](const Vec& p) { return p[0] > 0.5 ? 1.0 / 0.0 : 1.0; }),
      doctest::Contains("non-finite integrand"), std::runtime_error);
}

TEST_CASE("inflow mesh: constant velocity selects one edge") {
  auto beta = [](const Vec&) { return vec2(1.0, 0.0); };
  InflowMesh mesh = build_inflow_mesh(Box::unit_square(), beta, 0.1);
  REQUIRE(mesh.size() == 10);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    CHECK(mesh.points(i, 0) == 0.0);
    CHECK(mesh.weights[i] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(mesh.normals(i, 0) == -1.0);
  }
}

TEST_CASE("inflow mesh: curve-interface problem selects the x=0 and y=0 edges") {
  ProblemSpec prob = make_2d_curve();
  InflowMesh mesh = build_inflow_mesh(prob, 0.1);
  REQUIRE(mesh.size() == 20);
  int on_x0 = 0, on_y0 = 0;
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    if (mesh.points(i, 0) == 0.0) ++on_x0;
    if (mesh.points(i, 1) == 0.0) ++on_y0;
  }
  CHECK(on_x0 == 10);
  CHECK(on_y0 == 10);
}

TEST_CASE("inflow mesh: cylinder problem selects the y=0 and x=1 faces") {
  ProblemSpec prob = make_3d_cylinder();
  InflowMesh mesh = build_inflow_mesh(prob, 0.25);
  REQUIRE(mesh.size() == 32);  // two faces of 16 midpoints
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const bool y0 = mesh.points(i, 1) == 0.0;
    const bool x1 = mesh.points(i, 0) == 1.0;
    CHECK((y0 || x1));
  }
}

TEST_CASE("inflow mesh: three-segment problem matches the stated boundary") {
  ProblemSpec prob = make_2d_three_segment();
  InflowMesh mesh = build_inflow_mesh(prob, 0.05);
  REQUIRE(mesh.size() == 40);  // x=1 edge and y=0 edge
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    CHECK((mesh.points(i, 0) == 1.0 || mesh.points(i, 1) == 0.0));
  }
}

TEST_CASE("inflow selection flips with the velocity sign") {
  ProblemSpec prob = make_2d_curve();
  auto negated = [&](const Vec& p) { return (-prob.beta(p)).eval(); };
  InflowMesh mesh = build_inflow_mesh(prob.domain, negated, 0.1);
  REQUIRE(mesh.size() == 20);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    CHECK((mesh.points(i, 0) == 1.0 || mesh.points(i, 1) == 1.0));
  }
}

TEST_CASE("inflow integrate applies the |beta.n| weight") {
  // beta = (1, 0): integral over the inflow edge of v = y equals int_0^1 y dy
  auto beta = [](const Vec&) { return vec2(1.0, 0.0); };
  InflowMesh mesh = build_inflow_mesh(Box::unit_square(), beta, 0.01);
  const double got = integrate(mesh, [](const Vec& p) { return p[1]; });
  CHECK(got == doctest::Approx(0.5).epsilon(1e-13));
}
