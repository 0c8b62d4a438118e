#include "lsnn/cpwl.hpp"

#include <cmath>
#include <stdexcept>

namespace lsnn {

StepFunctionSpec step_spec_diagonal() {
  StepFunctionSpec spec;
  spec.domain = Box::unit_square();
  // Region 1 is closed below the line so that chi matches the approximant's
  // lower plateau on the line itself.
  spec.membership = [](const Vec& q) { return q[1] <= q[0] ? 1 : 2; };
  spec.alpha1 = -1.0;
  spec.alpha2 = 1.0;
  const double s2 = std::sqrt(2.0);
  Facet f;
  f.xi = vec2(-1.0 / s2, 1.0 / s2);
  f.b = 0.0;
  f.in_region = [](const Vec&) { return true; };
  spec.facets = {f};
  spec.interface_measure = s2;
  return spec;
}

StepFunctionSpec step_spec_three_segment() {
  const double a = 43.0 / 64.0;
  const double s2 = std::sqrt(2.0);
  const double c = std::sqrt(4.0 - 2.0 * s2);  // |(s2-1, 1)|

  StepFunctionSpec spec;
  spec.domain = Box::unit_square();
  ProblemSpec prob = make_2d_three_segment();
  spec.membership = prob.membership;
  spec.alpha1 = -1.0;
  spec.alpha2 = 1.0;

  Facet f1;  // strip y >= x
  f1.xi = vec2((s2 - 1.0) / c, 1.0 / c);
  f1.b = a / c;
  f1.in_region = [](const Vec& q) { return q[1] >= q[0]; };

  Facet f2;  // strip x - a/2 <= y < x
  f2.xi = vec2(1.0 / c, (s2 - 1.0) / c);
  f2.b = a / c;
  f2.in_region = [=](const Vec& q) { return q[1] >= q[0] - 0.5 * a && q[1] < q[0]; };

  Facet f3;  // strip y < x - a/2
  f3.xi = vec2((s2 - 1.0) / c, 1.0 / c);
  f3.b = 0.5 * s2 * a / c;
  f3.in_region = [=](const Vec& q) { return q[1] < q[0] - 0.5 * a; };

  spec.facets = {f1, f2, f3};

  // interface corners: start on the x=1 edge, kinks on the strip lines,
  // exit on the x=0 edge
  const Vec p0 = vec2(1.0, 1.0 - s2 + 0.5 * s2 * a);
  const Vec pa = vec2(a * (2.0 + s2) / 4.0, a * s2 / 4.0);
  const Vec pb = vec2(a / s2, a / s2);
  const Vec pe = vec2(0.0, a);
  spec.interface_measure = (p0 - pa).norm() + (pa - pb).norm() + (pb - pe).norm();
  return spec;
}

namespace {

const Facet& facet_at(const StepFunctionSpec& spec, const Vec& x) {
  for (const Facet& f : spec.facets) {
    if (f.in_region(x)) return f;
  }
  throw std::runtime_error("no facet region contains the query point");
}

}  // namespace

std::function<double(const Vec&)> cpwl_step_approximant(const StepFunctionSpec& spec, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("transition width eps must be positive");
  return [spec, eps](const Vec& x) {
    if (!spec.domain.contains(x, 1e-12)) {
      throw std::invalid_argument("cpwl approximant queried outside the domain");
    }
    const Facet& f = facet_at(spec, x);
    const double t = f.xi.dot(x) - f.b;
    const double ramp = std::max(t, 0.0) - std::max(t - eps, 0.0);
    return spec.alpha1 + (spec.alpha2 - spec.alpha1) / eps * ramp;
  };
}

double transition_error_bound(const StepFunctionSpec& spec, double eps) {
  if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");
  return std::sqrt(2.0 * spec.interface_measure) * std::abs(spec.alpha1 - spec.alpha2) *
         std::sqrt(eps);
}

TransitionError measure_transition_error(const StepFunctionSpec& spec, double eps,
                                         const std::function<Vec(const Vec&)>& beta,
                                         const DomainMesh& dmesh) {
  if (eps <= 0.0) throw std::invalid_argument("transition width eps must be positive");
  if (dmesh.h > eps / 4.0 + 1e-12) {
    throw std::invalid_argument("mesh too coarse to resolve the transition layer (need h <= eps/4)");
  }
  const double slope = (spec.alpha2 - spec.alpha1) / eps;
  double l2 = 0.0, deriv = 0.0;
  for (Eigen::Index i = 0; i < dmesh.size(); ++i) {
    const Vec x = dmesh.points.row(i).transpose();
    const Facet& f = facet_at(spec, x);
    const double t = f.xi.dot(x) - f.b;
    const double ramp = std::max(t, 0.0) - std::max(t - eps, 0.0);
    const double p = spec.alpha1 + slope * ramp;
    const double chi = spec.membership(x) == 1 ? spec.alpha1 : spec.alpha2;
    l2 += (chi - p) * (chi - p);
    if (t > 0.0 && t < eps) {
      const double d = slope * f.xi.dot(beta(x));  // chi_beta = 0 a.e.
      deriv += d * d;
    }
  }
  TransitionError err;
  err.l2_part = std::sqrt(l2 * dmesh.cell_weight);
  err.deriv_part = std::sqrt(deriv * dmesh.cell_weight);
  err.total = std::sqrt((l2 + deriv) * dmesh.cell_weight);
  return err;
}

NetworkParams build_transition_network(const AffineForm& l1, const AffineForm& l2,
                                       double threshold, double eps, double alpha1, double alpha2,
                                       double domain_bound, const Box& domain) {
  if (eps <= 0.0) throw std::invalid_argument("transition width eps must be positive");
  const int d = static_cast<int>(l1.c.size());
  if (l2.c.size() != d || domain.dim() != d) {
    throw std::invalid_argument("affine form / domain dimension mismatch");
  }
  // l2 + C must stay positive so the first layer passes it through; an
  // affine form attains its extrema at box corners.
  for (int corner = 0; corner < (1 << d); ++corner) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = (corner >> i) & 1 ? domain.hi[i] : domain.lo[i];
    if (l2.eval(x) + domain_bound <= 0.0) {
      throw std::invalid_argument("domain_bound too small: l2 + C must be positive on the domain");
    }
  }

  NetworkShape shape;
  shape.widths = {d, 2, 2, 1};
  NetworkParams p(shape);

  // layer 1: z1 = l1 - l2, z2 = l2 + C
  auto W1 = p.weight(0);
  auto b1 = p.bias(0);
  W1.row(0) = (l1.c - l2.c).transpose();
  b1[0] = -(l1.c0 - l2.c0);
  W1.row(1) = l2.c.transpose();
  b1[1] = -(l2.c0 + domain_bound);

  // layer 2: m = relu(z1) + relu(z2) - C - threshold, and m - eps
  auto W2 = p.weight(1);
  auto b2 = p.bias(1);
  W2 << 1.0, 1.0, 1.0, 1.0;
  b2[0] = domain_bound + threshold;
  b2[1] = domain_bound + threshold + eps;

  // output: alpha1 + (alpha2-alpha1)/eps (relu(m) - relu(m-eps))
  const double k = (alpha2 - alpha1) / eps;
  auto W3 = p.weight(2);
  auto b3 = p.bias(2);
  W3 << k, -k;
  b3[0] = -alpha1;
  return p;
}

JumpTrace characteristic_jump(const ProblemSpec& problem, const Vec& x0, double s_max, int steps) {
  if (!problem.interface) {
    throw std::invalid_argument("problem has no interface metadata for the jump oracle");
  }
  if (steps < 1 || s_max <= 0.0) throw std::invalid_argument("bad streamline parameters");
  const InterfaceInfo& info = *problem.interface;
  const double dg = info.g_plus - info.g_minus;
  const int d = problem.dim;

  // augmented state: position, G = int gamma, J = int e^G (f+ - f-)
  auto rhs = [&](const Vec& x, double /*G unused in x'*/) { return problem.beta(x); };
  auto gdot = [&](const Vec& x) { return problem.gamma(x); };
  auto jdot = [&](const Vec& x, double G) {
    return std::exp(G) * (info.f_plus(x) - info.f_minus(x));
  };

  const double hstep = s_max / steps;
  JumpTrace trace;
  std::vector<double> svals, jvals;
  std::vector<Vec> xvals;

  Vec x = x0;
  double G = 0.0, J = 0.0;
  svals.push_back(0.0);
  xvals.push_back(x);
  jvals.push_back(std::exp(-G) * std::abs(J + dg));

  for (int n = 0; n < steps; ++n) {
    // classical one-step 4th order update of (x, G, J)
    const Vec k1x = rhs(x, G);
    const double k1g = gdot(x), k1j = jdot(x, G);
    const Vec x2 = x + 0.5 * hstep * k1x;
    const double G2 = G + 0.5 * hstep * k1g;
    const Vec k2x = rhs(x2, G2);
    const double k2g = gdot(x2), k2j = jdot(x2, G2);
    const Vec x3 = x + 0.5 * hstep * k2x;
    const double G3 = G + 0.5 * hstep * k2g;
    const Vec k3x = rhs(x3, G3);
    const double k3g = gdot(x3), k3j = jdot(x3, G3);
    const Vec x4 = x + hstep * k3x;
    const double G4 = G + hstep * k3g;
    const Vec k4x = rhs(x4, G4);
    const double k4g = gdot(x4), k4j = jdot(x4, G4);

    const Vec xn = x + (hstep / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    const double Gn = G + (hstep / 6.0) * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
    const double Jn = J + (hstep / 6.0) * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);

    if (!problem.domain.contains(xn, 1e-12)) {
      trace.truncated = true;
      break;
    }
    x = xn;
    G = Gn;
    J = Jn;
    svals.push_back(hstep * (n + 1));
    xvals.push_back(x);
    jvals.push_back(std::exp(-G) * std::abs(J + dg));
  }

  const Eigen::Index m = static_cast<Eigen::Index>(svals.size());
  trace.s.resize(m);
  trace.jump.resize(m);
  trace.points.resize(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    trace.s[i] = svals[static_cast<std::size_t>(i)];
    trace.jump[i] = jvals[static_cast<std::size_t>(i)];
    trace.points.row(i) = xvals[static_cast<std::size_t>(i)].transpose();
  }
  return trace;
}

}  // namespace lsnn
