#pragma once

#include <Eigen/Dense>

#include <functional>

#include "lsnn/geometry.hpp"

namespace lsnn {

/// Midpoint-rule mesh on an axis-aligned box: one node per cell center,
/// uniform weight h^d.
struct DomainMesh {
  Box box;
  double h = 0.0;
  Eigen::MatrixXd points;  // N x d, cell centers
  double cell_weight = 0.0;

  Eigen::Index size() const { return points.rows(); }
};

/// Face-midpoint mesh of the inflow boundary. Weights already carry the
/// |beta . n| factor, so the weighted inflow norm is a plain weighted sum.
struct InflowMesh {
  double h = 0.0;
  Eigen::MatrixXd points;   // N x d, face midpoints with beta . n < 0
  Eigen::VectorXd weights;  // |beta . n| h^{d-1}
  Eigen::MatrixXd normals;  // N x d, outward unit normals

  Eigen::Index size() const { return points.rows(); }
};

/// Uniform cell-center mesh; every box side must be an integer multiple of h
/// (to within 1e-12).
DomainMesh build_domain_mesh(const Box& box, double h);

/// Select the face midpoints where beta . n < 0; faces with beta . n >= 0 at
/// the midpoint are excluded.
InflowMesh build_inflow_mesh(const Box& box, const std::function<Vec(const Vec&)>& beta, double h);

double integrate(const DomainMesh& mesh, const std::function<double(const Vec&)>& fn);
double integrate(const InflowMesh& mesh, const std::function<double(const Vec&)>& fn);

}  // namespace lsnn
