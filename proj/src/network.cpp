#include "lsnn/network.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lsnn {

void NetworkShape::validate() const {
  if (widths.size() < 3) {
    throw std::invalid_argument("network needs at least one hidden layer (depth >= 2)");
  }
  for (int w : widths) {
    if (w < 1) throw std::invalid_argument("layer widths must be >= 1");
  }
  if (widths.back() != 1) throw std::invalid_argument("output width must be 1");
}

std::int64_t NetworkShape::param_count() const {
  std::int64_t n = 0;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    n += static_cast<std::int64_t>(widths[l - 1]) * widths[l] + widths[l];
  }
  return n;
}

std::string NetworkShape::label() const {
  std::string s;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (i) s += "-";
    s += std::to_string(widths[i]);
  }
  return s;
}

NetworkShape NetworkShape::parse(const std::string& text) {
  NetworkShape shape;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '-')) {
    if (part.empty()) throw std::invalid_argument("bad shape string: " + text);
    shape.widths.push_back(std::stoi(part));
  }
  shape.validate();
  return shape;
}

std::int64_t param_count(const NetworkShape& shape) { return shape.param_count(); }

NetworkParams::NetworkParams(NetworkShape shape) : shape_(std::move(shape)) {
  shape_.validate();
  w_off_.resize(shape_.depth());
  b_off_.resize(shape_.depth());
  std::int64_t off = 0;
  for (int l = 0; l < shape_.depth(); ++l) {
    const std::int64_t nin = shape_.widths[l], nout = shape_.widths[l + 1];
    w_off_[l] = off;
    off += nin * nout;
    b_off_[l] = off;
    off += nout;
  }
  theta_.assign(static_cast<std::size_t>(off), 0.0);
}

Eigen::Map<RowMat> NetworkParams::weight(int l) {
  return {theta_.data() + w_off_[l], shape_.widths[l + 1], shape_.widths[l]};
}
Eigen::Map<const RowMat> NetworkParams::weight(int l) const {
  return {theta_.data() + w_off_[l], shape_.widths[l + 1], shape_.widths[l]};
}
Eigen::Map<Eigen::VectorXd> NetworkParams::bias(int l) {
  return {theta_.data() + b_off_[l], shape_.widths[l + 1]};
}
Eigen::Map<const Eigen::VectorXd> NetworkParams::bias(int l) const {
  return {theta_.data() + b_off_[l], shape_.widths[l + 1]};
}

namespace {
// Uniform [0,1) from the top 53 bits of a 64-bit state; hand rolled so the
// stream does not depend on the standard library's distribution internals.
inline double uniform_unit(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}
}  // namespace

NetworkParams init_random(const NetworkShape& shape, std::uint64_t seed) {
  NetworkParams p(shape);
  std::mt19937_64 eng(seed);
  for (int l = 0; l < shape.depth(); ++l) {
    const int nin = shape.widths[l], nout = shape.widths[l + 1];
    const double s = std::sqrt(6.0 / (nin + nout));
    auto W = p.weight(l);
    for (int i = 0; i < nout; ++i) {
      for (int j = 0; j < nin; ++j) W(i, j) = (2.0 * uniform_unit(eng) - 1.0) * s;
    }
    auto b = p.bias(l);
    for (int i = 0; i < nout; ++i) b[i] = uniform_unit(eng);
  }
  return p;
}

double forward(const NetworkParams& p, const Eigen::Ref<const Vec>& x) {
  const NetworkShape& shape = p.shape();
  if (x.size() != shape.input_dim()) throw std::invalid_argument("forward: input dim mismatch");
  Vec a = x;
  for (int l = 0; l < shape.depth(); ++l) {
    Vec z = p.weight(l) * a - p.bias(l);
    if (l + 1 < shape.depth()) {
      a = z.cwiseMax(0.0);
    } else {
      return z[0];
    }
  }
  return 0.0;  // unreachable
}

std::vector<Vec> preactivations(const NetworkParams& p, const Eigen::Ref<const Vec>& x) {
  const NetworkShape& shape = p.shape();
  if (x.size() != shape.input_dim()) {
    throw std::invalid_argument("preactivations: input dim mismatch");
  }
  std::vector<Vec> zs;
  zs.reserve(shape.depth());
  Vec a = x;
  for (int l = 0; l < shape.depth(); ++l) {
    Vec z = p.weight(l) * a - p.bias(l);
    zs.push_back(z);
    if (l + 1 < shape.depth()) a = z.cwiseMax(0.0);
  }
  return zs;
}

void grad_params(const NetworkParams& p, const Eigen::Ref<const Vec>& x, double upstream,
                 double* grad_out) {
  const NetworkShape& shape = p.shape();
  if (x.size() != shape.input_dim()) throw std::invalid_argument("grad_params: input dim mismatch");
  const int L = shape.depth();
  std::vector<Vec> zs(L), as(L);  // as[l] = post-activation of layer l
  Vec a = x;
  for (int l = 0; l < L; ++l) {
    zs[l] = p.weight(l) * a - p.bias(l);
    as[l] = (l + 1 < L) ? zs[l].cwiseMax(0.0) : zs[l];
    a = as[l];
  }

  NetworkParams g(shape);  // zero scratch with the same offsets
  Vec delta(1);
  delta[0] = upstream;
  for (int l = L - 1; l >= 0; --l) {
    const Vec& below = (l == 0) ? Vec(x) : as[l - 1];
    g.weight(l) = delta * below.transpose();
    g.bias(l) = -delta;
    if (l > 0) {
      Vec da = p.weight(l).transpose() * delta;
      delta = da.cwiseProduct((zs[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  std::copy(g.data(), g.data() + g.size(), grad_out);
}

// ---------------------------------------------------------------------------
// Serialization: one-line JSON header, then the flat array as little-endian
// 64-bit floats. Round trip is bit exact.
// ---------------------------------------------------------------------------

void NetworkParams::save(const std::string& path) const {
  nlohmann::json header;
  header["format"] = "lsnn-params";
  header["version"] = 1;
  header["widths"] = shape_.widths;
  header["count"] = size();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << header.dump() << "\n";
  out.write(reinterpret_cast<const char*>(theta_.data()),
            static_cast<std::streamsize>(theta_.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

NetworkParams NetworkParams::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("truncated params file: " + path);
  nlohmann::json header = nlohmann::json::parse(line);
  if (header.value("format", "") != std::string("lsnn-params")) {
    throw std::runtime_error("not a params file: " + path);
  }
  NetworkShape shape;
  shape.widths = header.at("widths").get<std::vector<int>>();
  NetworkParams p(shape);
  if (header.at("count").get<std::int64_t>() != p.size()) {
    throw std::runtime_error("params header count mismatch: " + path);
  }
  in.read(reinterpret_cast<char*>(p.data()), static_cast<std::streamsize>(p.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(p.size() * sizeof(double))) {
    throw std::runtime_error("truncated params payload: " + path);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Batched kernels
// ---------------------------------------------------------------------------

void BatchWorkspace::ensure(const NetworkShape& shape, Eigen::Index want) {
  const int L = shape.depth();
  const bool fresh = Z.size() != static_cast<std::size_t>(L);
  if (fresh) {
    Z.assign(L, {});
    A.assign(L, {});
    D.assign(L, {});
  }
  if (fresh || Z[0].rows() < want) {
    for (int l = 0; l < L; ++l) {
      Z[l].resize(want, shape.widths[l + 1]);
      A[l].resize(want, shape.widths[l + 1]);
      D[l].resize(want, shape.widths[l + 1]);
    }
  }
  rows = want;
}

void batch_forward(const NetworkParams& p, const Eigen::Ref<const Eigen::MatrixXd>& X,
                   BatchWorkspace& ws) {
  const NetworkShape& shape = p.shape();
  if (X.cols() != shape.input_dim()) throw std::invalid_argument("batch_forward: dim mismatch");
  const int L = shape.depth();
  const Eigen::Index m = X.rows();
  ws.ensure(shape, m);
  for (int l = 0; l < L; ++l) {
    // W is row-major n_out x n_in, so its transpose maps directly for GEMM.
    auto Wt = Eigen::Map<const Eigen::MatrixXd>(p.weight(l).data(), shape.widths[l],
                                                shape.widths[l + 1]);
    auto Z = ws.Z[l].topRows(m);
    if (l == 0) {
      Z.noalias() = X * Wt;
    } else {
      Z.noalias() = ws.A[l - 1].topRows(m) * Wt;
    }
    Z.rowwise() -= p.bias(l).transpose();
    if (l + 1 < L) {
      ws.A[l].topRows(m) = Z.cwiseMax(0.0);
    } else {
      ws.A[l].topRows(m) = Z;
    }
  }
}

void batch_backward(const NetworkParams& p, const Eigen::Ref<const Eigen::MatrixXd>& X,
                    BatchWorkspace& ws, const Eigen::Ref<const Eigen::VectorXd>& upstream,
                    double* grad_flat) {
  const NetworkShape& shape = p.shape();
  const int L = shape.depth();
  const Eigen::Index m = X.rows();
  if (upstream.size() != m || ws.rows != m) {
    throw std::invalid_argument("batch_backward: workspace/upstream size mismatch");
  }

  ws.D[L - 1].topRows(m).col(0) = upstream;
  for (int l = L - 1; l >= 0; --l) {
    const int nin = shape.widths[l], nout = shape.widths[l + 1];
    Eigen::Map<RowMat> gW(grad_flat + p.weight_offset(l), nout, nin);
    Eigen::Map<Eigen::VectorXd> gb(grad_flat + p.bias_offset(l), nout);
    auto D = ws.D[l].topRows(m);
    if (l == 0) {
      gW.noalias() += D.transpose() * X;
    } else {
      gW.noalias() += D.transpose() * ws.A[l - 1].topRows(m);
    }
    gb.noalias() -= D.colwise().sum().transpose();
    if (l > 0) {
      auto W = Eigen::Map<const RowMat>(p.weight(l).data(), nout, nin);
      ws.D[l - 1].topRows(m).noalias() = D * W;
      ws.D[l - 1].topRows(m).array() *= (ws.Z[l - 1].topRows(m).array() > 0.0).cast<double>();
    }
  }
}

Eigen::Index batch_chunk_rows(const NetworkShape& shape) {
  int wmax = 1;
  for (int w : shape.widths) wmax = std::max(wmax, w);
  const Eigen::Index rows = (1 << 19) / std::max(wmax, 64);  // ~4 MB of doubles
  return std::clamp<Eigen::Index>(rows, 64, 2048);
}

Eigen::VectorXd batch_values(const NetworkParams& p, const Eigen::Ref<const Eigen::MatrixXd>& X) {
  const Eigen::Index n = X.rows();
  Eigen::VectorXd out(n);
  const Eigen::Index chunk = batch_chunk_rows(p.shape());
  BatchWorkspace ws;
  for (Eigen::Index start = 0; start < n; start += chunk) {
    const Eigen::Index m = std::min(chunk, n - start);
    batch_forward(p, X.middleRows(start, m), ws);
    out.segment(start, m) = ws.A.back().col(0).head(m);
  }
  return out;
}

Eigen::MatrixXd batch_preactivations(const NetworkParams& p,
                                     const Eigen::Ref<const Eigen::MatrixXd>& X, int layer) {
  const NetworkShape& shape = p.shape();
  if (layer < 1 || layer > shape.depth()) throw std::invalid_argument("layer out of range");
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd out(n, shape.widths[layer]);
  const Eigen::Index chunk = batch_chunk_rows(shape);
  BatchWorkspace ws;
  for (Eigen::Index start = 0; start < n; start += chunk) {
    const Eigen::Index m = std::min(chunk, n - start);
    batch_forward(p, X.middleRows(start, m), ws);
    out.middleRows(start, m) = ws.Z[layer - 1].topRows(m);
  }
  return out;
}

}  // namespace lsnn
