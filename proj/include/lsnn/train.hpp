#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lsnn/network.hpp"
#include "lsnn/optimizer.hpp"
#include "lsnn/transport.hpp"

namespace lsnn {

struct TrainOptions {
  std::uint64_t base_seed = 0;  // restart k initializes with base_seed + k
  int checkpoint_every = 10000;
  std::function<void(int iter, const NetworkParams&)> checkpoint_cb;
  std::function<void(int iter, double loss)> progress_cb;
  // Reductions are always fixed-order and therefore deterministic; the flag
  // is kept so configs can state it explicitly.
  bool deterministic_reduction = true;
};

struct TrainResult {
  NetworkParams params;
  /// Winning trajectory: loss_history[i] is the loss at the start of
  /// iteration i, with one final entry for the trained parameters.
  std::vector<double> loss_history;
  std::vector<double> warmup_losses;  // per restart, after warmup_iters steps
  int selected_restart = 0;
};

/// The multi-start protocol: warmup_restarts independent short runs, keep
/// the parameters with the smallest loss, continue training them to
/// total_iters. Deterministic for a fixed (seed, schedule, meshes).
TrainResult multistart_train(const ProblemSpec& problem, const NetworkShape& shape,
                             const TrainSchedule& schedule, const DomainMesh& dmesh,
                             const InflowMesh& bmesh, const TransportConfig& cfg,
                             const TrainOptions& options = {});

}  // namespace lsnn
