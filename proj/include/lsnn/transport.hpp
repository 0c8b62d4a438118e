#pragma once

#include <Eigen/Dense>

#include <functional>

#include "lsnn/network.hpp"
#include "lsnn/problem.hpp"
#include "lsnn/quadrature.hpp"

namespace lsnn {

/// Discretization knobs for the directional derivative.
struct TransportConfig {
  double rho = 0.0;  // backward finite-difference step, default h/4
};

inline TransportConfig default_transport(double h) { return TransportConfig{h / 4.0}; }

/// |beta| (v(x) - v(x - rho*beta/|beta|)) / rho. Zero velocity yields zero.
/// The backward point may leave the domain; the caller's v must be global
/// (networks are).
double fd_directional_derivative(const std::function<double(const Vec&)>& v, const Vec& x,
                                 const Vec& beta_at_x, double rho);

/// Precomputed quadrature/coefficient tables for one problem; evaluates the
/// discrete least-squares functional and its exact parameter gradient.
/// Node loops run over fixed-size chunks in index order, so results are
/// reproducible run to run.
class LsSystem {
 public:
  LsSystem(const ProblemSpec& problem, const DomainMesh& dmesh, const InflowMesh& bmesh,
           const TransportConfig& cfg);

  double loss(const NetworkParams& params, bool zero_data = false) const;
  /// Returns the loss; overwrites grad (size params.size()).
  double loss_and_grad(const NetworkParams& params, double* grad, bool zero_data = false) const;

  Eigen::Index domain_nodes() const { return X_.rows(); }
  Eigen::Index boundary_nodes() const { return Xb_.rows(); }
  double rho() const { return rho_; }

 private:
  template <bool WithGrad>
  double run(const NetworkParams& params, double* grad, bool zero_data) const;

  double cell_w_ = 0.0;
  double rho_ = 0.0;
  bool has_transport_ = true;      // false when beta vanishes everywhere
  Eigen::MatrixXd X_, Xs_;         // nodes and backward-FD points
  Eigen::VectorXd coef_x_, coef_s_, fvals_;  // residual = cx*v(x) + cs*v(xs) - f
  Eigen::MatrixXd Xb_;
  Eigen::VectorXd wb_, gvals_;

  // scratch reused across the many evaluations of one training run; a
  // LsSystem instance is therefore not safe for concurrent calls
  mutable BatchWorkspace wsx_, wss_, wsb_;
  mutable Eigen::VectorXd r_, upx_, ups_;
};

double discrete_ls(const NetworkParams& params, const ProblemSpec& problem,
                   const DomainMesh& dmesh, const InflowMesh& bmesh, const TransportConfig& cfg);

Eigen::VectorXd discrete_ls_gradient(const NetworkParams& params, const ProblemSpec& problem,
                                     const DomainMesh& dmesh, const InflowMesh& bmesh,
                                     const TransportConfig& cfg);

/// sqrt(L(v; f,g)) / sqrt(L(v; 0,0)); rejects an identically vanishing
/// denominator.
double ls_ratio(const NetworkParams& params, const ProblemSpec& problem, const DomainMesh& dmesh,
                const InflowMesh& bmesh, const TransportConfig& cfg);

}  // namespace lsnn
