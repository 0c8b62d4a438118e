#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include "lsnn/cpwl.hpp"
#include "lsnn/network.hpp"

using namespace lsnn;

namespace {

// Clamped two-piece transition formula, written out independently of the
// library's evaluators.
double remark_formula(double x, double y, double eps) {
  const double raw = (y >= x) ? -1.0 + 2.0 / eps * (y + 0.5 * x - 0.8 + 0.5 * eps)
                              : -1.0 + 2.0 / eps * (0.5 * y + x - 0.8 + 0.5 * eps);
  return std::clamp(raw, -1.0, 1.0);
}

NetworkParams remark_network(double eps) {
  AffineForm l1{vec2(0.5, 1.0), 0.0};  // y + x/2
  AffineForm l2{vec2(1.0, 0.5), 0.0};  // x + y/2
  return build_transition_network(l1, l2, 0.8 - 0.5 * eps, eps, -1.0, 1.0, 1.0,
                                  Box::unit_square());
}

}  // namespace

TEST_CASE("shape validation and labels") {
  CHECK_THROWS_AS(NetworkShape::parse("2-1"), std::invalid_argument);    // no hidden layer
  CHECK_THROWS_AS(NetworkShape::parse("2-5-2"), std::invalid_argument);  // output width != 1
  CHECK_THROWS_AS(NetworkShape::parse("2-0-1"), std::invalid_argument);
  CHECK(NetworkShape::parse("2-5-5-1").label() == "2-5-5-1");
  CHECK(NetworkShape::parse("3-50-50-1").depth() == 3);
}

TEST_CASE("parameter counts match the published tables") {
  CHECK(param_count(NetworkShape::parse("2-5-5-1")) == 51);
  CHECK(param_count(NetworkShape::parse("2-300-1")) == 1201);
  CHECK(param_count(NetworkShape::parse("3-5-5-1")) == 56);
  CHECK(param_count(NetworkShape::parse("3-50-50-1")) == 2801);
}

TEST_CASE("forward: zero network maps everything to zero") {
  NetworkParams p(NetworkShape::parse("2-4-4-1"));
  CHECK(forward(p, vec2(0.3, -7.0)) == 0.0);
  CHECK(forward(p, vec2(11.0, 2.5)) == 0.0);
}

TEST_CASE("forward: single hidden neuron computing relu(x1)") {
  NetworkParams p(NetworkShape::parse("2-1-1"));
  p.weight(0)(0, 0) = 1.0;  // z = x1
  p.weight(1)(0, 0) = 1.0;  // identity output
  CHECK(forward(p, vec2(-1.0, 0.3)) == 0.0);
  CHECK(forward(p, vec2(0.7, -5.0)) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("forward: input dimension mismatch is rejected") {
  NetworkParams p(NetworkShape::parse("2-3-1"));
  CHECK_THROWS_AS(forward(p, vec3(0.0, 0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("forward: transition network agrees with the piecewise formula") {
  const double eps = 0.2;
  NetworkParams p = remark_network(eps);
  CHECK(p.shape().label() == "2-2-2-1");
  CHECK(std::abs(forward(p, vec2(0.9, 0.9)) - remark_formula(0.9, 0.9, eps)) < 1e-14);
  CHECK(forward(p, vec2(0.9, 0.9)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("preactivations: zero network, lengths and values") {
  NetworkShape shape = NetworkShape::parse("2-3-4-1");
  NetworkParams p(shape);
  auto zs = preactivations(p, vec2(0.4, 0.6));
  REQUIRE(zs.size() == 3);
  CHECK(zs[0].size() == 3);
  CHECK(zs[1].size() == 4);
  CHECK(zs[2].size() == 1);
  for (const auto& z : zs) CHECK(z.norm() == 0.0);
}

TEST_CASE("preactivations: point on the first-layer hyperplane") {
  NetworkParams p(NetworkShape::parse("2-1-1"));
  p.weight(0)(0, 0) = 1.0;
  p.bias(0)[0] = 0.5;
  auto zs = preactivations(p, vec2(0.5, 123.0));
  CHECK(zs[0][0] == 0.0);
}

TEST_CASE("preactivations: transition network vanishes on l1 = l2") {
  NetworkParams p = remark_network(0.2);
  auto zs = preactivations(p, vec2(0.37, 0.37));  // on y = x
  CHECK(std::abs(zs[0][0]) < 1e-16);              // the relu(l1 - l2) unit
}

TEST_CASE("preactivations: last entry reproduces forward exactly") {
  NetworkParams p = init_random(NetworkShape::parse("2-7-5-1"), 99);
  const Vec x = vec2(0.21, 0.77);
  auto zs = preactivations(p, x);
  CHECK(zs.back()[0] == forward(p, x));
}

TEST_CASE("grad_params: zero upstream gives a zero gradient") {
  NetworkParams p = init_random(NetworkShape::parse("2-6-6-1"), 3);
  Eigen::VectorXd g(p.size());
  grad_params(p, vec2(0.4, 0.9), 0.0, g.data());
  CHECK(g.norm() == 0.0);
}

TEST_CASE("grad_params: affine regime matches hand arithmetic") {
  // all pre-activations strictly positive at the probe point
  NetworkParams p(NetworkShape::parse("2-2-1"));
  p.weight(0) << 1.0, 0.5, -0.25, 1.0;
  p.bias(0) << -5.0, -5.0;  // z = Wx + 5 > 0 near the unit square
  p.weight(1) << 2.0, 3.0;
  p.bias(1)[0] = 0.7;
  const Vec x = vec2(0.3, 0.4);
  const double upstream = 1.5;

  Eigen::VectorXd g(p.size());
  grad_params(p, x, upstream, g.data());

  const double a1 = 1.0 * 0.3 + 0.5 * 0.4 + 5.0;
  const double a2 = -0.25 * 0.3 + 1.0 * 0.4 + 5.0;
  // layout: W0 row-major (4), b0 (2), W1 (2), b1 (1)
  CHECK(g[0] == doctest::Approx(upstream * 2.0 * 0.3).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(upstream * 2.0 * 0.4).epsilon(1e-14));
  CHECK(g[2] == doctest::Approx(upstream * 3.0 * 0.3).epsilon(1e-14));
  CHECK(g[3] == doctest::Approx(upstream * 3.0 * 0.4).epsilon(1e-14));
  CHECK(g[4] == doctest::Approx(-upstream * 2.0).epsilon(1e-14));
  CHECK(g[5] == doctest::Approx(-upstream * 3.0).epsilon(1e-14));
  CHECK(g[6] == doctest::Approx(upstream * a1).epsilon(1e-14));
  CHECK(g[7] == doctest::Approx(upstream * a2).epsilon(1e-14));
  CHECK(g[8] == doctest::Approx(-upstream).epsilon(1e-14));
}

TEST_CASE("grad_params: matches central finite differences away from kinks") {
  std::mt19937_64 rng(2024);
  const NetworkShape shape = NetworkShape::parse("2-5-4-1");
  int tested = 0;
  for (std::uint64_t seed = 0; tested < 8 && seed < 60; ++seed) {
    NetworkParams p = init_random(shape, seed);
    Vec x = vec2(0.1 + 0.8 * (rng() >> 11) * 0x1.0p-53, 0.1 + 0.8 * (rng() >> 11) * 0x1.0p-53);

    // skip draws with a pre-activation too close to a kink
    double zmin = 1e30;
    for (const auto& z : preactivations(p, x)) zmin = std::min(zmin, z.cwiseAbs().minCoeff());
    if (zmin < 1e-4) continue;
    ++tested;

    const double upstream = 1.7;
    Eigen::VectorXd g(p.size());
    grad_params(p, x, upstream, g.data());

    const double step = 1e-6;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      NetworkParams pp = p, pm = p;
      pp.data()[i] += step;
      pm.data()[i] -= step;
      const double fd = upstream * (forward(pp, x) - forward(pm, x)) / (2.0 * step);
      const double rel = std::abs(g[i] - fd) / std::max({std::abs(g[i]), std::abs(fd), 1e-4});
      CHECK(rel < 1e-6);
    }
  }
  CHECK(tested == 8);
}

TEST_CASE("init_random: deterministic per seed, distinct across seeds") {
  const NetworkShape shape = NetworkShape::parse("2-5-5-1");
  NetworkParams a = init_random(shape, 42), b = init_random(shape, 42);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  NetworkParams c = init_random(shape, 43);
  bool differs = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) differs |= a.data()[i] != c.data()[i];
  CHECK(differs);
  CHECK(a.size() == 51);
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(std::isfinite(a.data()[i]));
}

TEST_CASE("hidden layer rescaling leaves the function unchanged") {
  NetworkParams p = init_random(NetworkShape::parse("2-6-5-1"), 11);
  NetworkParams q = p;
  const double c = 2.75;
  q.weight(0) *= c;
  q.bias(0) *= c;
  q.weight(1) /= c;  // relu is positively homogeneous
  std::mt19937_64 rng(5);
  for (int k = 0; k < 12; ++k) {
    const Vec x = vec2(2.0 * (rng() >> 11) * 0x1.0p-53 - 0.5, 2.0 * (rng() >> 11) * 0x1.0p-53 - 0.5);
    CHECK(forward(q, x) == doctest::Approx(forward(p, x)).epsilon(1e-12));
  }
}

TEST_CASE("forward is piecewise linear along segments") {
  NetworkParams p = init_random(NetworkShape::parse("2-8-8-1"), 13);
  const Vec a = vec2(-0.2, 0.1), b = vec2(1.1, 0.9);
  const int n = 2001;
  Eigen::VectorXd vals(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    vals[i] = forward(p, (a + t * (b - a)).eval());
  }
  int kinks = 0;
  double scale = 0.0;
  for (int i = 1; i + 1 < n; ++i) scale = std::max(scale, std::abs(vals[i]));
  for (int i = 1; i + 1 < n; ++i) {
    const double second = vals[i - 1] - 2.0 * vals[i] + vals[i + 1];
    if (std::abs(second) > 1e-9 * std::max(scale, 1.0)) ++kinks;
  }
  // at most one kink sample per hidden unit crossing (plus direct neighbours)
  CHECK(kinks <= 2 * 16);
  CHECK(kinks >= 1);
}

TEST_CASE("serialization round trip is bit exact") {
  NetworkParams p = init_random(NetworkShape::parse("3-5-5-1"), 1234);
  const std::string path = "params_roundtrip.net";
  p.save(path);
  NetworkParams q = NetworkParams::load(path);
  REQUIRE(q.size() == p.size());
  CHECK(q.shape() == p.shape());
  CHECK(std::memcmp(p.data(), q.data(), sizeof(double) * p.size()) == 0);
  CHECK(forward(p, vec3(0.1, 0.2, 0.3)) == forward(q, vec3(0.1, 0.2, 0.3)));
  std::remove(path.c_str());
}

TEST_CASE("batched evaluation agrees with pointwise forward") {
  NetworkParams p = init_random(NetworkShape::parse("2-9-7-1"), 5);
  Eigen::MatrixXd X(300, 2);
  std::mt19937_64 rng(77);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    X(i, 0) = 2.0 * (rng() >> 11) * 0x1.0p-53 - 0.5;
    X(i, 1) = 2.0 * (rng() >> 11) * 0x1.0p-53 - 0.5;
  }
  const Eigen::VectorXd v = batch_values(p, X);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    CHECK(v[i] == doctest::Approx(forward(p, X.row(i).transpose())).epsilon(1e-13));
  }
  const Eigen::MatrixXd Z2 = batch_preactivations(p, X, 2);
  auto zs = preactivations(p, X.row(7).transpose());
  for (Eigen::Index c = 0; c < Z2.cols(); ++c) {
    CHECK(Z2(7, c) == doctest::Approx(zs[1][c]).epsilon(1e-13));
  }
}
