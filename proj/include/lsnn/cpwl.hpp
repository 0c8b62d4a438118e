#pragma once

#include <functional>
#include <vector>

#include "lsnn/geometry.hpp"
#include "lsnn/network.hpp"
#include "lsnn/problem.hpp"
#include "lsnn/quadrature.hpp"

namespace lsnn {

/// One hyperplane xi . x = b of the interface approximation together with
/// the subregion it serves; |xi| = 1.
struct Facet {
  Vec xi;
  double b = 0.0;
  std::function<bool(const Vec&)> in_region;
};

/// Two-plateau step function chi with the facet list used to build its CPWL
/// approximant: chi = alpha1 on Omega_1, alpha2 on Omega_2.
struct StepFunctionSpec {
  Box domain;
  std::function<int(const Vec&)> membership;  // 1 or 2
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::vector<Facet> facets;
  double interface_measure = 0.0;  // (d-1)-dimensional measure of the interface
};

/// Straight-line interface y = x on the unit square, plateaus -1 / +1.
StepFunctionSpec step_spec_diagonal();
/// The three line-segment interface of the first 2-D benchmark.
StepFunctionSpec step_spec_three_segment();

/// Width-eps ramp approximant: on the facet containing x,
/// alpha1 + (alpha2-alpha1)/eps (relu(xi.x-b) - relu(xi.x-b-eps)).
/// Rejects points outside the spec's domain.
std::function<double(const Vec&)> cpwl_step_approximant(const StepFunctionSpec& spec, double eps);

/// sqrt(2 |I|) |alpha1 - alpha2| sqrt(eps).
double transition_error_bound(const StepFunctionSpec& spec, double eps);

struct TransitionError {
  double total = 0.0;
  double l2_part = 0.0;
  double deriv_part = 0.0;
};

/// Quadrature evaluation of ||chi - p||_beta with the analytic ramp gradient
/// inside the transition band; requires the mesh to resolve the band
/// (h <= eps/4).
TransitionError measure_transition_error(const StepFunctionSpec& spec, double eps,
                                         const std::function<Vec(const Vec&)>& beta,
                                         const DomainMesh& dmesh);

/// Affine form c . x + c0 used to describe the transition target's pieces.
struct AffineForm {
  Vec c;
  double c0 = 0.0;
  double eval(const Vec& x) const { return c.dot(x) + c0; }
};

/// Exact depth-3 network for the clamped two-piece transition function
///   alpha1 + (alpha2-alpha1)/eps * clamp(max(l1, l2) - threshold, 0, eps).
/// Hidden layers compute relu(l1-l2), relu(l2+C) and then the two shifted
/// ramps of the max; requires l2 + C > 0 on the domain.
NetworkParams build_transition_network(const AffineForm& l1, const AffineForm& l2,
                                       double threshold, double eps, double alpha1, double alpha2,
                                       double domain_bound, const Box& domain);

/// Streamline of the velocity field from an inflow discontinuity point,
/// with the solution-jump magnitude accumulated along it.
struct JumpTrace {
  Eigen::VectorXd s;        // parameter values, s[0] = 0
  Eigen::MatrixXd points;   // traced streamline (the interface)
  Eigen::VectorXd jump;     // |u+ - u-| at each sample
  bool truncated = false;   // stopped early because the streamline left the domain
};

/// Classical 4th-order integration of x'(s) = beta(x) from x0, accumulating
///   exp(-int gamma) | int exp(int gamma) (f+ - f-) + g+ - g- |.
JumpTrace characteristic_jump(const ProblemSpec& problem, const Vec& x0, double s_max, int steps);

}  // namespace lsnn
