#include "flowtop/brownian.hpp"

#include <cmath>

namespace flowtop {

BrownianPath sample_brownian_path(int m, double horizon, double dt, uint64_t seed,
                                  long trial_index) {
  if (!(dt > 0.0)) throw ConfigInvalid("dt must be positive");
  if (horizon < 0.0) throw ConfigInvalid("horizon must be nonnegative");
  if (m < 1) throw ConfigInvalid("noise dimension must be at least 1");
  BrownianPath p;
  p.dt = dt;
  p.m = m;
  p.seed = seed;
  p.trial_index = trial_index;
  p.n_steps = long(std::ceil(horizon / dt - tol::kGridSnap));
  if (p.n_steps < 0) p.n_steps = 0;
  p.increments.resize(p.n_steps, m);
  const double s = std::sqrt(dt);
  for (long k = 0; k < p.n_steps; ++k)
    for (int j = 0; j < m; ++j)
      p.increments(k, j) =
          s * standard_normal(seed, uint64_t(trial_index), uint64_t(k), uint64_t(j));
  return p;
}

BrownianPath coarsen(const BrownianPath& path, int factor) {
  if (factor < 1 || path.n_steps % factor != 0)
    throw ConfigInvalid("coarsening factor must divide the step count");
  BrownianPath c;
  c.dt = path.dt * factor;
  c.m = path.m;
  c.seed = path.seed;
  c.trial_index = path.trial_index;
  c.n_steps = path.n_steps / factor;
  c.increments.resize(c.n_steps, c.m);
  for (long k = 0; k < c.n_steps; ++k) {
    for (int j = 0; j < c.m; ++j) {
      double s = 0.0;
      for (int r = 0; r < factor; ++r) s += path.increments(k * factor + r, j);
      c.increments(k, j) = s;
    }
  }
  return c;
}

}  // namespace flowtop
