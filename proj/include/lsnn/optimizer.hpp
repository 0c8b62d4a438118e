#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace lsnn {

/// Learning-rate schedule and iteration budget: the rate starts at
/// initial_lr and halves every halving_period iterations; training first
/// runs warmup_restarts short runs of warmup_iters each, keeps the best,
/// and continues it up to total_iters.
struct TrainSchedule {
  double initial_lr = 0.004;
  int halving_period = 50000;
  int total_iters = 0;
  int warmup_restarts = 10;
  int warmup_iters = 5000;

  void validate() const;
};

/// initial_lr * 2^(-floor(iter / halving_period)).
double lr_at(const TrainSchedule& schedule, int iter);

/// First/second moment estimates for ADAM, laid out like the flat parameters.
struct AdamState {
  Eigen::VectorXd m, v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  explicit AdamState(Eigen::Index n) : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

/// One bias-corrected ADAM update, in place. Rejects non-finite gradients.
void adam_step(double* params, const double* grads, Eigen::Index n, AdamState& state, double lr);

}  // namespace lsnn
