#pragma once

#include <string>
#include <vector>

#include "lsnn/network.hpp"
#include "lsnn/problem.hpp"
#include "lsnn/quadrature.hpp"
#include "lsnn/transport.hpp"

namespace lsnn {

/// One table row: relative errors, the least-squares ratio and the
/// parameter count for a trained network.
struct ErrorReport {
  std::string structure;
  double rel_l2 = 0.0;
  double rel_graph = 0.0;
  double ls_ratio = 0.0;
  std::int64_t parameters = 0;
};

/// ||u - v||_0 / ||u||_0 by the midpoint rule.
double relative_l2_error(const NetworkParams& params, const ProblemSpec& problem,
                         const DomainMesh& dmesh);

/// Relative error in the norm (||.||^2 + ||(.)_beta||^2)^(1/2). The network's
/// directional derivative uses the backward difference; nodes whose stencil
/// straddles the interface are left out of the derivative term (the exact
/// derivative does not exist there), all nodes enter the L2 term.
double relative_graph_error(const NetworkParams& params, const ProblemSpec& problem,
                            const DomainMesh& dmesh, const TransportConfig& cfg);

/// Grid points where some component of a layer's pre-activation changes sign
/// (or nearly vanishes) -- the network's visible kinks.
struct BreakingLineSet {
  int layer = 0;
  Eigen::MatrixXd points;  // flagged probe-lattice points
};

/// Scans a res x res probe lattice (the z = z_slice plane in 3-D). A point is
/// flagged when some pre-activation component is below tol in magnitude or
/// changes sign towards a lattice neighbour. tol < 0 selects
/// 1e-3 * (layer pre-activation RMS); an all-zero layer flags nothing.
BreakingLineSet breaking_lines(const NetworkParams& params, int layer, const Box& domain,
                               int grid_res, double tol = -1.0, double z_slice = 0.5);

ErrorReport make_report(const NetworkParams& params, const ProblemSpec& problem,
                        const DomainMesh& dmesh, const InflowMesh& bmesh,
                        const TransportConfig& cfg);

}  // namespace lsnn
