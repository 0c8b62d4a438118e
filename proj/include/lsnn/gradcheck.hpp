#pragma once

#include <cstdint>
#include <vector>

#include "lsnn/network.hpp"
#include "lsnn/problem.hpp"

namespace lsnn {

struct GradCheckResult {
  int draws = 0;
  double max_rel_dev = 0.0;
  std::vector<double> per_draw;
  std::vector<std::uint64_t> seeds_used;
};

/// Analytic loss gradient vs central finite differences (step 1e-6) for
/// `draws` random networks; deviation is normalized by max(1, |fd|_inf).
/// Draws whose pre-activations come within 1e-4 of a kink at some quadrature
/// node are replaced by the next seed. `corrupt` != 0 perturbs one analytic
/// component (negative-control hook for the test harness).
GradCheckResult gradcheck(const ProblemSpec& problem, const NetworkShape& shape, double h,
                          int draws, std::uint64_t seed, double corrupt = 0.0);

}  // namespace lsnn
