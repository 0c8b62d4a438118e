#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "lsnn/geometry.hpp"

namespace lsnn {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Layer widths n0..nL of a fully connected ReLU network. n0 is the input
/// dimension, nL the output width (always 1 here); depth L is the number of
/// affine maps, so there are L-1 hidden layers.
struct NetworkShape {
  std::vector<int> widths;

  int depth() const { return static_cast<int>(widths.size()) - 1; }
  int input_dim() const { return widths.front(); }
  std::int64_t param_count() const;
  void validate() const;

  std::string label() const;                      // e.g. "2-5-5-1"
  static NetworkShape parse(const std::string&);  // inverse of label()

  bool operator==(const NetworkShape& o) const { return widths == o.widths; }
};

/// Weights and biases of a ReLU network, stored as one flat array of doubles.
/// Layout: for each layer l, the weight matrix in row-major order (one row
/// per neuron) followed by the bias vector. A layer maps a to relu(W a - b)
/// (affine only for the output layer); note the minus sign on the bias.
class NetworkParams {
 public:
  NetworkParams() = default;
  explicit NetworkParams(NetworkShape shape);  // zero initialized

  const NetworkShape& shape() const { return shape_; }
  std::int64_t size() const { return static_cast<std::int64_t>(theta_.size()); }
  double* data() { return theta_.data(); }
  const double* data() const { return theta_.data(); }

  Eigen::Map<RowMat> weight(int l);
  Eigen::Map<const RowMat> weight(int l) const;
  Eigen::Map<Eigen::VectorXd> bias(int l);
  Eigen::Map<const Eigen::VectorXd> bias(int l) const;

  std::int64_t weight_offset(int l) const { return w_off_[l]; }
  std::int64_t bias_offset(int l) const { return b_off_[l]; }

  void save(const std::string& path) const;
  static NetworkParams load(const std::string& path);

 private:
  NetworkShape shape_;
  std::vector<double> theta_;
  std::vector<std::int64_t> w_off_, b_off_;
};

std::int64_t param_count(const NetworkShape& shape);

/// Seeded random parameters: weights uniform in +-sqrt(6/(n_in+n_out)),
/// biases uniform in [0,1) so first-layer hyperplanes cross the unit box.
NetworkParams init_random(const NetworkShape& shape, std::uint64_t seed);

/// Network value at a single point (defined on all of R^d).
double forward(const NetworkParams& p, const Eigen::Ref<const Vec>& x);

/// Pre-activation vectors W a - b of every layer, output layer last.
std::vector<Vec> preactivations(const NetworkParams& p, const Eigen::Ref<const Vec>& x);

/// Gradient of upstream * forward(x) with respect to every parameter,
/// written into grad_out (size() entries). Subgradient convention: relu'(0)=0.
void grad_params(const NetworkParams& p, const Eigen::Ref<const Vec>& x, double upstream,
                 double* grad_out);

// ---------------------------------------------------------------------------
// Batched evaluation over the rows of an N x d matrix. Chunks are processed
// in a fixed order so reductions are reproducible run to run.
// ---------------------------------------------------------------------------

/// Per-chunk forward/backward scratch; Z[l] and A[l] hold rows x widths[l+1]
/// blocks. Buffers grow to the largest chunk seen and are then reused.
struct BatchWorkspace {
  std::vector<Eigen::MatrixXd> Z, A, D;
  Eigen::Index rows = 0;  // active rows of the current chunk
  void ensure(const NetworkShape& shape, Eigen::Index rows);
};

/// Forward pass over all rows of X at once; fills ws.Z / ws.A.
/// Values end up in ws.A.back().col(0).
void batch_forward(const NetworkParams& p, const Eigen::Ref<const Eigen::MatrixXd>& X,
                   BatchWorkspace& ws);

/// Reverse pass for sum_i upstream[i] * v(x_i); requires a preceding
/// batch_forward on the same X/ws. Accumulates into grad_flat.
void batch_backward(const NetworkParams& p, const Eigen::Ref<const Eigen::MatrixXd>& X,
                    BatchWorkspace& ws, const Eigen::Ref<const Eigen::VectorXd>& upstream,
                    double* grad_flat);

/// Convenience: network values at every row of X (chunked internally).
Eigen::VectorXd batch_values(const NetworkParams& p, const Eigen::Ref<const Eigen::MatrixXd>& X);

/// Pre-activations of one layer (1-based) at every row of X.
Eigen::MatrixXd batch_preactivations(const NetworkParams& p,
                                     const Eigen::Ref<const Eigen::MatrixXd>& X, int layer);

/// Chunk length heuristic keeping per-layer scratch inside the cache.
Eigen::Index batch_chunk_rows(const NetworkShape& shape);

}  // namespace lsnn
