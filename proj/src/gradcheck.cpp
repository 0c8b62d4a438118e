#include "lsnn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsnn/transport.hpp"

namespace lsnn {

namespace {

// smallest pre-activation magnitude over every quadrature-relevant point
double min_preactivation(const NetworkParams& params, const Eigen::MatrixXd& pts) {
  double zmin = 1e300;
  const int L = params.shape().depth();
  for (int l = 1; l <= L; ++l) {
    const Eigen::MatrixXd Z = batch_preactivations(params, pts, l);
    zmin = std::min(zmin, Z.cwiseAbs().minCoeff());
  }
  return zmin;
}

}  // namespace

GradCheckResult gradcheck(const ProblemSpec& problem, const NetworkShape& shape, double h,
                          int draws, std::uint64_t seed, double corrupt) {
  if (draws < 1) throw std::invalid_argument("gradcheck needs at least one draw");
  DomainMesh dmesh = build_domain_mesh(problem.domain, h);
  InflowMesh bmesh = build_inflow_mesh(problem, h);
  TransportConfig cfg = default_transport(h);
  LsSystem sys(problem, dmesh, bmesh, cfg);

  // every point the loss sees: nodes, their backward stencil, boundary
  Eigen::MatrixXd probe(dmesh.size() * 2 + bmesh.size(), problem.dim);
  probe.topRows(dmesh.size()) = dmesh.points;
  for (Eigen::Index i = 0; i < dmesh.size(); ++i) {
    const Vec x = dmesh.points.row(i).transpose();
    const Vec b = problem.beta(x);
    const double mag = b.norm();
    const Vec xs = mag > 0.0 ? Vec(x - (cfg.rho / mag) * b) : x;
    probe.row(dmesh.size() + i) = xs.transpose();
  }
  if (bmesh.size() > 0) probe.bottomRows(bmesh.size()) = bmesh.points;

  GradCheckResult result;
  std::uint64_t s = seed;
  const std::uint64_t s_end = seed + 200 + static_cast<std::uint64_t>(draws);
  while (result.draws < draws && s < s_end) {
    NetworkParams params = init_random(shape, s);
    const std::uint64_t this_seed = s++;
    if (min_preactivation(params, probe) < 1e-4) continue;  // kink-adjacent draw

    Eigen::VectorXd grad(params.size());
    sys.loss_and_grad(params, grad.data());
    if (corrupt != 0.0) grad[0] += corrupt;

    const double step = 1e-6;
    Eigen::VectorXd fd(params.size());
    for (Eigen::Index i = 0; i < params.size(); ++i) {
      NetworkParams pp = params, pm = params;
      pp.data()[i] += step;
      pm.data()[i] -= step;
      fd[i] = (sys.loss(pp) - sys.loss(pm)) / (2.0 * step);
    }
    const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
    const double dev = (grad - fd).cwiseAbs().maxCoeff() / scale;

    result.per_draw.push_back(dev);
    result.seeds_used.push_back(this_seed);
    result.max_rel_dev = std::max(result.max_rel_dev, dev);
    ++result.draws;
  }
  if (result.draws < draws) {
    throw std::runtime_error("gradcheck: could not find enough kink-free draws");
  }
  return result;
}

}  // namespace lsnn
