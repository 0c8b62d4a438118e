#include "lsnn/transport.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lsnn {

double fd_directional_derivative(const std::function<double(const Vec&)>& v, const Vec& x,
                                 const Vec& beta_at_x, double rho) {
  if (rho <= 0.0) throw std::invalid_argument("fd step rho must be positive");
  const double mag = beta_at_x.norm();
  if (mag == 0.0) return 0.0;
  const Vec back = x - (rho / mag) * beta_at_x;
  const double vx = v(x), vb = v(back);
  if (!std::isfinite(vx) || !std::isfinite(vb)) {
    throw std::runtime_error("fd_directional_derivative: non-finite function value");
  }
  return mag * (vx - vb) / rho;
}

LsSystem::LsSystem(const ProblemSpec& problem, const DomainMesh& dmesh, const InflowMesh& bmesh,
                   const TransportConfig& cfg) {
  if (cfg.rho <= 0.0) throw std::invalid_argument("fd step rho must be positive");
  rho_ = cfg.rho;
  cell_w_ = dmesh.cell_weight;

  const Eigen::Index n = dmesh.size();
  const int d = dmesh.box.dim();
  X_ = dmesh.points;
  Xs_.resize(n, d);
  coef_x_.resize(n);
  coef_s_.resize(n);
  fvals_.resize(n);
  has_transport_ = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec x = X_.row(i).transpose();
    const Vec b = problem.beta(x);
    const double mag = b.norm();
    const double gam = problem.gamma(x);
    if (mag > 0.0) {
      has_transport_ = true;
      Xs_.row(i) = (x - (rho_ / mag) * b).transpose();
      coef_x_[i] = mag / rho_ + gam;
      coef_s_[i] = -mag / rho_;
    } else {
      Xs_.row(i) = x.transpose();
      coef_x_[i] = gam;
      coef_s_[i] = 0.0;
    }
    fvals_[i] = problem.f(x);
  }

  const Eigen::Index nb = bmesh.size();
  Xb_ = bmesh.points;
  wb_ = bmesh.weights;
  gvals_.resize(nb);
  for (Eigen::Index i = 0; i < nb; ++i) {
    gvals_[i] = problem.g(Xb_.row(i).transpose());
  }
}

template <bool WithGrad>
double LsSystem::run(const NetworkParams& params, double* grad, bool zero_data) const {
  const Eigen::Index n = X_.rows(), nb = Xb_.rows();
  const Eigen::Index chunk = batch_chunk_rows(params.shape());
  BatchWorkspace &wsx = wsx_, &wss = wss_, &wsb = wsb_;
  Eigen::VectorXd &r = r_, &upx = upx_, &ups = ups_;

  double acc = 0.0;
  for (Eigen::Index start = 0; start < n; start += chunk) {
    const Eigen::Index m = std::min(chunk, n - start);
    batch_forward(params, X_.middleRows(start, m), wsx);
    const auto vx = wsx.A.back().col(0).head(m);
    r.resize(m);
    if (has_transport_) {
      batch_forward(params, Xs_.middleRows(start, m), wss);
      const auto vs = wss.A.back().col(0).head(m);
      r = coef_x_.segment(start, m).cwiseProduct(vx) + coef_s_.segment(start, m).cwiseProduct(vs);
    } else {
      r = coef_x_.segment(start, m).cwiseProduct(vx);
    }
    if (!zero_data) r -= fvals_.segment(start, m);
    acc += r.squaredNorm();
    if constexpr (WithGrad) {
      upx = (2.0 * cell_w_) * coef_x_.segment(start, m).cwiseProduct(r);
      batch_backward(params, X_.middleRows(start, m), wsx, upx, grad);
      if (has_transport_) {
        ups = (2.0 * cell_w_) * coef_s_.segment(start, m).cwiseProduct(r);
        batch_backward(params, Xs_.middleRows(start, m), wss, ups, grad);
      }
    }
  }
  double loss = acc * cell_w_;

  double bacc = 0.0;
  for (Eigen::Index start = 0; start < nb; start += chunk) {
    const Eigen::Index m = std::min(chunk, nb - start);
    batch_forward(params, Xb_.middleRows(start, m), wsb);
    r = wsb.A.back().col(0).head(m);
    if (!zero_data) r -= gvals_.segment(start, m);
    bacc += wb_.segment(start, m).cwiseProduct(r).dot(r);
    if constexpr (WithGrad) {
      upx = 2.0 * wb_.segment(start, m).cwiseProduct(r);
      batch_backward(params, Xb_.middleRows(start, m), wsb, upx, grad);
    }
  }
  loss += bacc;

  if (!std::isfinite(loss)) throw std::runtime_error("discrete LS loss is non-finite");
  return loss;
}

double LsSystem::loss(const NetworkParams& params, bool zero_data) const {
  return run<false>(params, nullptr, zero_data);
}

double LsSystem::loss_and_grad(const NetworkParams& params, double* grad, bool zero_data) const {
  std::fill(grad, grad + params.size(), 0.0);
  return run<true>(params, grad, zero_data);
}

double discrete_ls(const NetworkParams& params, const ProblemSpec& problem,
                   const DomainMesh& dmesh, const InflowMesh& bmesh, const TransportConfig& cfg) {
  return LsSystem(problem, dmesh, bmesh, cfg).loss(params);
}

Eigen::VectorXd discrete_ls_gradient(const NetworkParams& params, const ProblemSpec& problem,
                                     const DomainMesh& dmesh, const InflowMesh& bmesh,
                                     const TransportConfig& cfg) {
  Eigen::VectorXd grad(params.size());
  LsSystem(problem, dmesh, bmesh, cfg).loss_and_grad(params, grad.data());
  return grad;
}

double ls_ratio(const NetworkParams& params, const ProblemSpec& problem, const DomainMesh& dmesh,
                const InflowMesh& bmesh, const TransportConfig& cfg) {
  LsSystem sys(problem, dmesh, bmesh, cfg);
  const double num = sys.loss(params, false);
  const double den = sys.loss(params, true);
  if (den <= 0.0) {
    throw std::runtime_error("ls_ratio: homogeneous functional vanishes (zero network?)");
  }
  return std::sqrt(num) / std::sqrt(den);
}

}  // namespace lsnn
