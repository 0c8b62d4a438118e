#include "lsnn/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsnn {

namespace {

long long cells_per_side(double side, double h, int axis) {
  const double ratio = side / h;
  const long long m = std::llround(ratio);
  if (m < 1 || std::abs(static_cast<double>(m) * h - side) > 1e-12) {
    throw std::invalid_argument("mesh size h = " + std::to_string(h) +
                                " does not divide box side " + std::to_string(side) +
                                " (axis " + std::to_string(axis) + ")");
  }
  return m;
}

std::string point_str(const Eigen::MatrixXd& pts, Eigen::Index i) {
  std::string s = "(";
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    if (j) s += ", ";
    s += std::to_string(pts(i, j));
  }
  return s + ")";
}

}  // namespace

DomainMesh build_domain_mesh(const Box& box, double h) {
  const int d = box.dim();
  if (h <= 0.0) throw std::invalid_argument("mesh size must be positive");
  std::vector<long long> m(d);
  long long total = 1;
  for (int i = 0; i < d; ++i) {
    m[i] = cells_per_side(box.side(i), h, i);
    total *= m[i];
  }

  DomainMesh mesh;
  mesh.box = box;
  mesh.h = h;
  mesh.cell_weight = std::pow(h, d);
  mesh.points.resize(total, d);

  std::vector<long long> idx(d, 0);
  for (long long n = 0; n < total; ++n) {
    for (int i = 0; i < d; ++i) {
      mesh.points(n, i) = box.lo[i] + (static_cast<double>(idx[i]) + 0.5) * h;
    }
    // odometer increment, first axis fastest
    for (int i = 0; i < d; ++i) {
      if (++idx[i] < m[i]) break;
      idx[i] = 0;
    }
  }
  return mesh;
}

InflowMesh build_inflow_mesh(const Box& box, const std::function<Vec(const Vec&)>& beta,
                             double h) {
  const int d = box.dim();
  if (h <= 0.0) throw std::invalid_argument("mesh size must be positive");
  const double face_weight = std::pow(h, d - 1);

  std::vector<Vec> pts;
  std::vector<Vec> nrm;
  std::vector<double> wts;

  for (int axis = 0; axis < d; ++axis) {
    for (int side = 0; side < 2; ++side) {
      Vec normal = Vec::Zero(d);
      normal[axis] = side == 0 ? -1.0 : 1.0;
      const double coord = side == 0 ? box.lo[axis] : box.hi[axis];

      // midpoint lattice over the remaining axes
      std::vector<int> other;
      std::vector<long long> m;
      long long total = 1;
      for (int i = 0; i < d; ++i) {
        if (i == axis) continue;
        other.push_back(i);
        m.push_back(cells_per_side(box.side(i), h, i));
        total *= m.back();
      }
      std::vector<long long> idx(other.size(), 0);
      for (long long n = 0; n < total; ++n) {
        Vec p(d);
        p[axis] = coord;
        for (std::size_t k = 0; k < other.size(); ++k) {
          p[other[k]] = box.lo[other[k]] + (static_cast<double>(idx[k]) + 0.5) * h;
        }
        const double bdotn = beta(p).dot(normal);
        if (bdotn < 0.0) {
          pts.push_back(p);
          nrm.push_back(normal);
          wts.push_back(-bdotn * face_weight);
        }
        for (std::size_t k = 0; k < other.size(); ++k) {
          if (++idx[k] < m[k]) break;
          idx[k] = 0;
        }
      }
    }
  }

  InflowMesh mesh;
  mesh.h = h;
  mesh.points.resize(static_cast<Eigen::Index>(pts.size()), d);
  mesh.normals.resize(static_cast<Eigen::Index>(pts.size()), d);
  mesh.weights.resize(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    mesh.points.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    mesh.normals.row(static_cast<Eigen::Index>(i)) = nrm[i].transpose();
    mesh.weights[static_cast<Eigen::Index>(i)] = wts[i];
  }
  return mesh;
}

double integrate(const DomainMesh& mesh, const std::function<double(const Vec&)>& fn) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const double v = fn(mesh.points.row(i).transpose());
    if (!std::isfinite(v)) {
      throw std::runtime_error("non-finite integrand at node " + std::to_string(i) + " = " +
                               point_str(mesh.points, i));
    }
    sum += v;
  }
  return sum * mesh.cell_weight;
}

double integrate(const InflowMesh& mesh, const std::function<double(const Vec&)>& fn) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const double v = fn(mesh.points.row(i).transpose());
    if (!std::isfinite(v)) {
      throw std::runtime_error("non-finite integrand at boundary node " + std::to_string(i) +
                               " = " + point_str(mesh.points, i));
    }
    sum += mesh.weights[i] * v;
  }
  return sum;
}

}  // namespace lsnn
