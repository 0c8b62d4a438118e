#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace lsnn {

using Vec = Eigen::VectorXd;

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

/// Axis-aligned box domain.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }

  double side(int i) const { return hi[i] - lo[i]; }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= side(i);
    return v;
  }

  bool contains(const Vec& p, double tol = 0.0) const {
    if (p.size() != lo.size()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    }
    return true;
  }

  static Box square(double a, double b) {
    return Box{vec2(a, a), vec2(b, b)};
  }
  static Box cube(double a, double b) {
    return Box{vec3(a, a, a), vec3(b, b, b)};
  }
  static Box unit_square() { return square(0.0, 1.0); }
  static Box unit_cube() { return cube(0.0, 1.0); }
};

}  // namespace lsnn
