#include "lsnn/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lsnn {

double relative_l2_error(const NetworkParams& params, const ProblemSpec& problem,
                         const DomainMesh& dmesh) {
  const Eigen::VectorXd v = batch_values(params, dmesh.points);
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < dmesh.size(); ++i) {
    const double u = problem.exact_u(dmesh.points.row(i).transpose());
    num += (u - v[i]) * (u - v[i]);
    den += u * u;
  }
  if (den <= 0.0) throw std::runtime_error("relative_l2_error: exact solution has zero norm");
  return std::sqrt(num) / std::sqrt(den);
}

double relative_graph_error(const NetworkParams& params, const ProblemSpec& problem,
                            const DomainMesh& dmesh, const TransportConfig& cfg) {
  if (cfg.rho <= 0.0) throw std::invalid_argument("fd step rho must be positive");
  const Eigen::Index n = dmesh.size();
  const int d = dmesh.box.dim();

  Eigen::MatrixXd Xs(n, d);
  Eigen::VectorXd mag(n);
  std::vector<char> include(static_cast<std::size_t>(n), 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec x = dmesh.points.row(i).transpose();
    const Vec b = problem.beta(x);
    mag[i] = b.norm();
    if (mag[i] > 0.0) {
      const Vec xs = x - (cfg.rho / mag[i]) * b;
      Xs.row(i) = xs.transpose();
      // exclude stencils that reach across the interface
      include[static_cast<std::size_t>(i)] =
          problem.membership(x) == problem.membership(xs) ? 1 : 0;
    } else {
      Xs.row(i) = x.transpose();
    }
  }

  const Eigen::VectorXd v = batch_values(params, dmesh.points);
  const Eigen::VectorXd vs = batch_values(params, Xs);

  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec x = dmesh.points.row(i).transpose();
    const double u = problem.exact_u(x);
    num += (u - v[i]) * (u - v[i]);
    den += u * u;
    if (include[static_cast<std::size_t>(i)]) {
      const double ub = problem.exact_u_beta(x);
      const double vb = mag[i] > 0.0 ? mag[i] * (v[i] - vs[i]) / cfg.rho : 0.0;
      num += (ub - vb) * (ub - vb);
      den += ub * ub;
    }
  }
  if (den <= 0.0) throw std::runtime_error("relative_graph_error: exact solution has zero norm");
  return std::sqrt(num) / std::sqrt(den);
}

BreakingLineSet breaking_lines(const NetworkParams& params, int layer, const Box& domain,
                               int grid_res, double tol, double z_slice) {
  const NetworkShape& shape = params.shape();
  if (layer < 1 || layer > shape.depth()) throw std::invalid_argument("layer out of range");
  if (grid_res < 2) throw std::invalid_argument("grid resolution must be >= 2");
  const int d = domain.dim();

  // probe lattice in the x-y plane (fixed z slice in 3-D)
  const Eigen::Index n = static_cast<Eigen::Index>(grid_res) * grid_res;
  Eigen::MatrixXd X(n, d);
  for (int j = 0; j < grid_res; ++j) {
    for (int i = 0; i < grid_res; ++i) {
      const Eigen::Index r = static_cast<Eigen::Index>(j) * grid_res + i;
      X(r, 0) = domain.lo[0] + domain.side(0) * i / (grid_res - 1);
      X(r, 1) = domain.lo[1] + domain.side(1) * j / (grid_res - 1);
      if (d == 3) X(r, 2) = z_slice;
    }
  }

  const Eigen::MatrixXd Z = batch_preactivations(params, X, layer);
  if (tol < 0.0) {
    const double rms = std::sqrt(Z.squaredNorm() / static_cast<double>(Z.size()));
    tol = 1e-3 * rms;
  }

  // sign change across an edge; landing exactly on zero from a strict sign
  // counts, but an identically zero component never does
  auto flagged = [&](Eigen::Index r1, Eigen::Index r2) {
    for (Eigen::Index c = 0; c < Z.cols(); ++c) {
      const double z1 = Z(r1, c), z2 = Z(r2, c);
      if ((z1 < 0.0 && z2 >= 0.0) || (z1 >= 0.0 && z2 < 0.0)) return true;
    }
    return false;
  };

  std::vector<Eigen::Index> hits;
  for (int j = 0; j < grid_res; ++j) {
    for (int i = 0; i < grid_res; ++i) {
      const Eigen::Index r = static_cast<Eigen::Index>(j) * grid_res + i;
      bool hit = false;
      for (Eigen::Index c = 0; c < Z.cols() && !hit; ++c) {
        hit = tol > 0.0 && std::abs(Z(r, c)) < tol;
      }
      if (!hit && i + 1 < grid_res) hit = flagged(r, r + 1);
      if (!hit && j + 1 < grid_res) hit = flagged(r, r + grid_res);
      if (hit) hits.push_back(r);
    }
  }

  BreakingLineSet set;
  set.layer = layer;
  set.points.resize(static_cast<Eigen::Index>(hits.size()), d);
  for (std::size_t k = 0; k < hits.size(); ++k) {
    set.points.row(static_cast<Eigen::Index>(k)) = X.row(hits[k]);
  }
  return set;
}

ErrorReport make_report(const NetworkParams& params, const ProblemSpec& problem,
                        const DomainMesh& dmesh, const InflowMesh& bmesh,
                        const TransportConfig& cfg) {
  ErrorReport report;
  report.structure = params.shape().label();
  report.rel_l2 = relative_l2_error(params, problem, dmesh);
  report.rel_graph = relative_graph_error(params, problem, dmesh, cfg);
  report.ls_ratio = ls_ratio(params, problem, dmesh, bmesh, cfg);
  report.parameters = params.shape().param_count();
  return report;
}

}  // namespace lsnn
