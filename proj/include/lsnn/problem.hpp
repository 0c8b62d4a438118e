#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lsnn/geometry.hpp"
#include "lsnn/quadrature.hpp"

namespace lsnn {

/// Metadata describing the solution discontinuity of a benchmark: where the
/// inflow data jumps, the boundary values on either side, and the side limits
/// of the right-hand side along the interface ("plus" is the Omega_2 side).
struct InterfaceInfo {
  Vec x0;                 // g-discontinuity point on the inflow boundary
  double g_plus = 0.0;    // boundary value approaching x0 from the Omega_2 side
  double g_minus = 0.0;   // ... from the Omega_1 side
  std::function<double(const Vec&)> f_plus;   // side limit of f along the interface
  std::function<double(const Vec&)> f_minus;
  double alpha1 = 0.0;    // step-part plateau on Omega_1
  double alpha2 = 0.0;    // ... on Omega_2
  double s_inside = 0.0;  // streamline parameter range staying inside the closed domain
  std::function<double(const Vec&)> dist_g_jump;  // distance to the g-jump locus
};

/// One advection-reaction benchmark: u_beta + gamma u = f in the box domain,
/// u = g on the inflow boundary, with known exact solution.
struct ProblemSpec {
  std::string id;
  int dim = 2;
  Box domain;
  std::function<Vec(const Vec&)> beta;
  std::function<double(const Vec&)> gamma;
  std::function<double(const Vec&)> f;
  std::function<double(const Vec&)> g;        // meaningful on the inflow boundary
  std::function<double(const Vec&)> exact_u;
  std::function<double(const Vec&)> exact_u_beta;  // analytic, away from the interface
  std::function<int(const Vec&)> membership;  // 1 = Omega_1, 2 = Omega_2
  std::optional<InterfaceInfo> interface;
};

// The six benchmarks, exactly as specified.
ProblemSpec make_2d_three_segment();
ProblemSpec make_2d_four_segment();
ProblemSpec make_2d_curve();
ProblemSpec make_2d_curve_uhat();
ProblemSpec make_3d_plane();
ProblemSpec make_3d_cylinder();

/// CPWL transition-layer target on [0,1]^2, clamped to [-1,1] so the value
/// saturates outside the width-eps band.
std::function<double(const Vec&)> make_remark_target(double eps);

/// L2 fitting of the transition-layer target cast as a degenerate transport
/// problem (beta = 0, gamma = 1, f = target), so the same training loop and
/// reports apply.
ProblemSpec make_remark_fit(double eps);

/// Stable string identifiers for the CLI.
const std::vector<std::string>& problem_ids();
ProblemSpec problem_by_id(const std::string& id);

inline InflowMesh build_inflow_mesh(const ProblemSpec& problem, double h) {
  return build_inflow_mesh(problem.domain, problem.beta, h);
}

}  // namespace lsnn
