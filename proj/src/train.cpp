#include "lsnn/train.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace lsnn {

namespace {

struct RunState {
  NetworkParams params;
  AdamState adam;
  std::vector<double> history;
};

// Advances one run by [from, to) iterations, recording the loss seen at the
// start of each.
void run_iters(const LsSystem& sys, const TrainSchedule& schedule, RunState& rs, int from, int to,
               Eigen::VectorXd& grad, const TrainOptions& options, bool continuation) {
  for (int iter = from; iter < to; ++iter) {
    const double loss = sys.loss_and_grad(rs.params, grad.data());
    if (!std::isfinite(loss)) {
      throw std::runtime_error("non-finite loss at iteration " + std::to_string(iter));
    }
    rs.history.push_back(loss);
    adam_step(rs.params.data(), grad.data(), rs.params.size(), rs.adam, lr_at(schedule, iter));
    if (continuation) {
      const int done = iter + 1;
      if (options.checkpoint_cb && options.checkpoint_every > 0 &&
          done % options.checkpoint_every == 0 && done < schedule.total_iters) {
        options.checkpoint_cb(done, rs.params);
      }
      if (options.progress_cb) options.progress_cb(iter, loss);
    }
  }
}

}  // namespace

TrainResult multistart_train(const ProblemSpec& problem, const NetworkShape& shape,
                             const TrainSchedule& schedule, const DomainMesh& dmesh,
                             const InflowMesh& bmesh, const TransportConfig& cfg,
                             const TrainOptions& options) {
  shape.validate();
  schedule.validate();
  LsSystem sys(problem, dmesh, bmesh, cfg);
  Eigen::VectorXd grad(NetworkParams(shape).size());

  TrainResult result;
  result.warmup_losses.resize(schedule.warmup_restarts);

  // Short independent warm-up runs; keep the best final loss.
  RunState best{NetworkParams(shape), AdamState(grad.size()), {}};
  double best_loss = std::numeric_limits<double>::infinity();
  for (int k = 0; k < schedule.warmup_restarts; ++k) {
    RunState rs{init_random(shape, options.base_seed + static_cast<std::uint64_t>(k)),
                AdamState(grad.size()),
                {}};
    rs.history.reserve(static_cast<std::size_t>(schedule.warmup_iters) + 1);
    run_iters(sys, schedule, rs, 0, schedule.warmup_iters, grad, options, false);
    const double final_loss = sys.loss(rs.params);
    rs.history.push_back(final_loss);
    result.warmup_losses[k] = final_loss;
    if (final_loss < best_loss) {
      best_loss = final_loss;
      best = std::move(rs);
      result.selected_restart = k;
    }
  }

  // Continue the winner; its optimizer state carries over.
  if (schedule.total_iters > schedule.warmup_iters) {
    best.history.pop_back();  // re-recorded by the first continued iteration
    run_iters(sys, schedule, best, schedule.warmup_iters, schedule.total_iters, grad, options,
              true);
    best.history.push_back(sys.loss(best.params));
  }

  if (options.checkpoint_cb) {
    options.checkpoint_cb(static_cast<int>(best.history.size()) - 1, best.params);
  }
  result.params = std::move(best.params);
  result.loss_history = std::move(best.history);
  return result;
}

}  // namespace lsnn
