#pragma once

#include "flowtop/core.hpp"
#include "flowtop/rng.hpp"

#include <Eigen/Core>

namespace flowtop {

// A materialised m-dimensional Brownian increment table on a fixed step grid.
// Regenerable bit for bit from (seed, trial_index): increment (k, j) is
// sqrt(dt) times the Philox normal at counter (trial, k, j).
struct BrownianPath {
  double dt = 0.0;
  long n_steps = 0;
  int m = 0;
  uint64_t seed = 0;
  long trial_index = 0;
  Eigen::MatrixXd increments;  // n_steps x m
};

BrownianPath sample_brownian_path(int m, double horizon, double dt, uint64_t seed,
                                  long trial_index);

// Sums consecutive rows; the coarse path at factor*dt driven by the same
// underlying noise, for step-doubling comparisons.
BrownianPath coarsen(const BrownianPath& path, int factor);

}  // namespace flowtop
