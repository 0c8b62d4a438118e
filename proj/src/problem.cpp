#include "lsnn/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lsnn {

namespace {

constexpr double kEdgeTol = 1e-12;

double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

// ---------------------------------------------------------------------------
// Three line-segment interface on the unit square, piecewise constant velocity.
// ---------------------------------------------------------------------------
ProblemSpec make_2d_three_segment() {
  const double a = 43.0 / 64.0;
  const double s2 = std::sqrt(2.0);
  const double y0 = 1.0 - s2 + 0.5 * s2 * a;  // g jump height on the x = 1 edge

  // strips for the velocity field
  auto strip = [](double x, double y, double a_) {
    if (y >= x) return 1;
    if (y >= x - 0.5 * a_) return 2;
    return 3;
  };
  auto in_omega1 = [=](double x, double y) {
    switch (strip(x, y, a)) {
      case 1:
        return y < (1.0 - s2) * x + a;
      case 2:
        return y < (x - a / s2) / (1.0 - s2) + a / s2;
      default:
        return y < (1.0 - s2) * x + 0.5 * s2 * a;
    }
  };

  ProblemSpec p;
  p.id = "2d-three-segment";
  p.dim = 2;
  p.domain = Box::unit_square();
  p.beta = [=](const Vec& q) {
    return strip(q[0], q[1], a) == 2 ? vec2(1.0 - s2, 1.0) : vec2(-1.0, s2 - 1.0);
  };
  p.gamma = [](const Vec&) { return 1.0; };
  p.f = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? -1.0 : 1.0; };
  p.exact_u = p.f;
  p.exact_u_beta = [](const Vec&) { return 0.0; };
  p.g = [=](const Vec& q) {
    return (std::abs(q[0] - 1.0) < kEdgeTol && q[1] >= y0) ? 1.0 : -1.0;
  };
  p.membership = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? 1 : 2; };

  InterfaceInfo info;
  info.x0 = vec2(1.0, y0);
  info.g_plus = 1.0;
  info.g_minus = -1.0;
  info.f_plus = [](const Vec&) { return 1.0; };
  info.f_minus = [](const Vec&) { return -1.0; };
  info.alpha1 = -1.0;
  info.alpha2 = 1.0;
  info.s_inside = 1.0;
  info.dist_g_jump = [=](const Vec& q) { return hypot2(q[0] - 1.0, q[1] - y0); };
  p.interface = info;
  return p;
}

// ---------------------------------------------------------------------------
// Four line-segment interface on (0,2)^2.
// ---------------------------------------------------------------------------
ProblemSpec make_2d_four_segment() {
  const double s2 = std::sqrt(2.0);

  auto strip = [](double x, double y) {
    if (y >= x + 1.0) return 1;
    if (y >= x) return 2;
    if (y >= x - 1.0) return 3;
    return 4;
  };
  auto in_omega1 = [=](double x, double y) {
    switch (strip(x, y)) {
      case 1:
        return y < (1.0 - s2) * x + 2.0;
      case 2:
        return y < (x - 1.0) / (1.0 - s2) + 1.0;
      case 3:
        return y < (1.0 - s2) * (x - 1.0) + 1.0;
      default:
        return y < x / (1.0 - s2) + 2.0 / (s2 - 1.0);
    }
  };

  ProblemSpec p;
  p.id = "2d-four-segment";
  p.dim = 2;
  p.domain = Box::square(0.0, 2.0);
  p.beta = [=](const Vec& q) {
    const int s = strip(q[0], q[1]);
    return (s == 2 || s == 4) ? vec2(1.0 - s2, 1.0) : vec2(-1.0, s2 - 1.0);
  };
  p.gamma = [](const Vec&) { return 1.0; };
  p.f = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? -1.0 : 1.0; };
  p.exact_u = p.f;
  p.exact_u_beta = [](const Vec&) { return 0.0; };
  p.g = [=](const Vec& q) { return std::abs(q[0] - 2.0) < kEdgeTol ? 1.0 : -1.0; };
  p.membership = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? 1 : 2; };

  InterfaceInfo info;
  info.x0 = vec2(2.0, 0.0);
  info.g_plus = 1.0;
  info.g_minus = -1.0;
  info.f_plus = [](const Vec&) { return 1.0; };
  info.f_minus = [](const Vec&) { return -1.0; };
  info.alpha1 = -1.0;
  info.alpha2 = 1.0;
  info.s_inside = 2.5;
  info.dist_g_jump = [](const Vec& q) { return hypot2(q[0] - 2.0, q[1]); };
  p.interface = info;
  return p;
}

// ---------------------------------------------------------------------------
// Parabolic interface y = x^2 + 1/8, variable velocity (1, 2x).
// ---------------------------------------------------------------------------
ProblemSpec make_2d_curve() {
  auto in_omega1 = [](double x, double y) { return y < x * x + 0.125; };

  ProblemSpec p;
  p.id = "2d-curve";
  p.dim = 2;
  p.domain = Box::unit_square();
  p.beta = [](const Vec& q) { return vec2(1.0, 2.0 * q[0]); };
  p.gamma = [](const Vec&) { return 1.0; };
  p.f = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? 0.0 : 1.0; };
  p.exact_u = p.f;
  p.exact_u_beta = [](const Vec&) { return 0.0; };
  p.g = [](const Vec& q) {
    return (std::abs(q[0]) < kEdgeTol && q[1] >= 0.125) ? 1.0 : 0.0;
  };
  p.membership = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? 1 : 2; };

  InterfaceInfo info;
  info.x0 = vec2(0.0, 0.125);
  info.g_plus = 1.0;
  info.g_minus = 0.0;
  info.f_plus = [](const Vec&) { return 1.0; };
  info.f_minus = [](const Vec&) { return 0.0; };
  info.alpha1 = 0.0;
  info.alpha2 = 1.0;
  info.s_inside = 0.9;
  info.dist_g_jump = [](const Vec& q) { return hypot2(q[0], q[1] - 0.125); };
  p.interface = info;
  return p;
}

// ---------------------------------------------------------------------------
// Circular-arc interface of radius 2/3, rotational velocity, nonzero
// continuous part x^2 + y^2.
// ---------------------------------------------------------------------------
ProblemSpec make_2d_curve_uhat() {
  const double r2 = 4.0 / 9.0;
  auto in_omega1 = [=](double x, double y) { return x * x + y * y < r2; };

  ProblemSpec p;
  p.id = "2d-curve-uhat";
  p.dim = 2;
  p.domain = Box::unit_square();
  p.beta = [](const Vec& q) { return vec2(-q[1], q[0]); };
  p.gamma = [](const Vec&) { return 1.0; };
  p.f = [=](const Vec& q) {
    const double rad = q[0] * q[0] + q[1] * q[1];
    return (in_omega1(q[0], q[1]) ? -1.0 : 1.0) + rad;
  };
  p.exact_u = p.f;
  p.exact_u_beta = [](const Vec&) { return 0.0; };  // beta is orthogonal to grad(x^2+y^2)
  p.g = [=](const Vec& q) {
    const double rad = q[0] * q[0] + q[1] * q[1];
    const bool lower = std::abs(q[1]) < kEdgeTol && q[0] < 2.0 / 3.0;
    return (lower ? -1.0 : 1.0) + rad;
  };
  p.membership = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? 1 : 2; };

  InterfaceInfo info;
  info.x0 = vec2(2.0 / 3.0, 0.0);
  info.g_plus = 1.0 + r2;
  info.g_minus = -1.0 + r2;
  info.f_plus = [](const Vec& q) { return 1.0 + q[0] * q[0] + q[1] * q[1]; };
  info.f_minus = [](const Vec& q) { return -1.0 + q[0] * q[0] + q[1] * q[1]; };
  info.alpha1 = -1.0;
  info.alpha2 = 1.0;
  info.s_inside = 1.5;
  info.dist_g_jump = [](const Vec& q) { return hypot2(q[0] - 2.0 / 3.0, q[1]); };
  p.interface = info;
  return p;
}

// ---------------------------------------------------------------------------
// Two-plane interface in the unit cube, gamma = f = 0.
// ---------------------------------------------------------------------------
ProblemSpec make_3d_plane() {
  const double s2 = std::sqrt(2.0);
  auto in_omega1 = [=](double x, double y) {
    return y < (1.0 - s2) * x + 0.7 && y < (x - 0.7) / (1.0 - s2);
  };

  ProblemSpec p;
  p.id = "3d-plane";
  p.dim = 3;
  p.domain = Box::unit_cube();
  p.beta = [=](const Vec& q) {
    Vec b(3);
    if (q[1] < q[0]) {
      b << 1.0 - s2, 1.0, 0.0;
    } else {
      b << -1.0, s2 - 1.0, 0.0;
    }
    return b;
  };
  p.gamma = [](const Vec&) { return 0.0; };
  p.f = [](const Vec&) { return 0.0; };
  p.exact_u = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? 0.0 : 1.0; };
  p.exact_u_beta = [](const Vec&) { return 0.0; };
  p.g = [](const Vec& q) {
    return (std::abs(q[1]) < kEdgeTol && q[0] < 0.7) ? 0.0 : 1.0;
  };
  p.membership = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? 1 : 2; };

  InterfaceInfo info;
  info.x0 = vec3(0.7, 0.0, 0.5);
  info.g_plus = 1.0;
  info.g_minus = 0.0;
  info.f_plus = [](const Vec&) { return 0.0; };
  info.f_minus = [](const Vec&) { return 0.0; };
  info.alpha1 = 0.0;
  info.alpha2 = 1.0;
  info.s_inside = 0.9;
  info.dist_g_jump = [](const Vec& q) { return hypot2(q[0] - 0.7, q[1]); };
  p.interface = info;
  return p;
}

// ---------------------------------------------------------------------------
// Cylindrical interface of radius 0.7 in the unit cube, rotational velocity.
// ---------------------------------------------------------------------------
ProblemSpec make_3d_cylinder() {
  const double r2 = 0.49;
  auto in_omega1 = [=](double x, double y) { return x * x + y * y < r2; };

  ProblemSpec p;
  p.id = "3d-cylinder";
  p.dim = 3;
  p.domain = Box::unit_cube();
  p.beta = [](const Vec& q) { return vec3(-q[1], q[0], 0.0); };
  p.gamma = [](const Vec&) { return 1.0; };
  p.f = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? 0.0 : 1.0; };
  p.exact_u = p.f;
  p.exact_u_beta = [](const Vec&) { return 0.0; };
  p.g = [](const Vec& q) {
    return (std::abs(q[1]) < kEdgeTol && q[0] < 0.7) ? 0.0 : 1.0;
  };
  p.membership = [=](const Vec& q) { return in_omega1(q[0], q[1]) ? 1 : 2; };

  InterfaceInfo info;
  info.x0 = vec3(0.7, 0.0, 0.5);
  info.g_plus = 1.0;
  info.g_minus = 0.0;
  info.f_plus = [](const Vec&) { return 1.0; };
  info.f_minus = [](const Vec&) { return 0.0; };
  info.alpha1 = 0.0;
  info.alpha2 = 1.0;
  info.s_inside = 1.5;
  info.dist_g_jump = [](const Vec& q) { return hypot2(q[0] - 0.7, q[1]); };
  p.interface = info;
  return p;
}

// ---------------------------------------------------------------------------
// Transition-layer target and its fitting problem
// ---------------------------------------------------------------------------

std::function<double(const Vec&)> make_remark_target(double eps) {
  if (eps <= 0.0) throw std::invalid_argument("transition width eps must be positive");
  return [eps](const Vec& q) {
    const double l1 = q[1] + 0.5 * q[0];
    const double l2 = q[0] + 0.5 * q[1];
    const double m = std::max(l1, l2) - (0.8 - 0.5 * eps);
    return -1.0 + (2.0 / eps) * std::clamp(m, 0.0, eps);
  };
}

ProblemSpec make_remark_fit(double eps) {
  auto target = make_remark_target(eps);

  ProblemSpec p;
  p.id = "remark-fit";
  p.dim = 2;
  p.domain = Box::unit_square();
  p.beta = [](const Vec&) { return vec2(0.0, 0.0); };
  p.gamma = [](const Vec&) { return 1.0; };
  p.f = target;
  p.exact_u = target;
  p.exact_u_beta = [](const Vec&) { return 0.0; };
  p.g = [](const Vec&) { return 0.0; };  // empty inflow boundary
  p.membership = [](const Vec&) { return 1; };
  return p;
}

const std::vector<std::string>& problem_ids() {
  static const std::vector<std::string> ids = {
      "2d-three-segment", "2d-four-segment", "2d-curve",
      "2d-curve-uhat",    "3d-plane",        "3d-cylinder",
      "remark-fit",
  };
  return ids;
}

ProblemSpec problem_by_id(const std::string& id) {
  if (id == "2d-three-segment") return make_2d_three_segment();
  if (id == "2d-four-segment") return make_2d_four_segment();
  if (id == "2d-curve") return make_2d_curve();
  if (id == "2d-curve-uhat") return make_2d_curve_uhat();
  if (id == "3d-plane") return make_3d_plane();
  if (id == "3d-cylinder") return make_3d_cylinder();
  if (id == "remark-fit") return make_remark_fit(0.2);
  throw std::invalid_argument("unknown problem id: " + id);
}

}  // namespace lsnn
