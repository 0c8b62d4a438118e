#include "lsnn/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lsnn {

void TrainSchedule::validate() const {
  if (initial_lr <= 0.0) throw std::invalid_argument("initial_lr must be positive");
  if (halving_period <= 0) throw std::invalid_argument("halving_period must be positive");
  if (total_iters < 0) throw std::invalid_argument("total_iters must be >= 0");
  if (warmup_restarts < 1) throw std::invalid_argument("warmup_restarts must be >= 1");
  if (warmup_iters < 0) throw std::invalid_argument("warmup_iters must be >= 0");
}

double lr_at(const TrainSchedule& schedule, int iter) {
  // Warm-up runs use the same schedule even when total_iters is smaller, so
  // the valid range extends to whichever phase is longer.
  const int range = std::max(schedule.total_iters, schedule.warmup_iters);
  if (iter < 0 || iter >= range) {
    throw std::invalid_argument("lr_at: iteration " + std::to_string(iter) + " out of range");
  }
  return schedule.initial_lr * std::pow(2.0, -static_cast<double>(iter / schedule.halving_period));
}

void adam_step(double* params, const double* grads, Eigen::Index n, AdamState& state, double lr) {
  if (state.m.size() != n || state.v.size() != n) {
    throw std::invalid_argument("adam_step: state layout mismatch");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(grads[i])) {
      throw std::runtime_error("adam_step: non-finite gradient component " + std::to_string(i));
    }
  }
  state.t += 1;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

}  // namespace lsnn
