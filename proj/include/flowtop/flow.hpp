#pragma once

#include "flowtop/brownian.hpp"
#include "flowtop/fields.hpp"
#include "flowtop/region.hpp"
#include "flowtop/stats.hpp"

#include <atomic>
#include <memory>
#include <optional>

namespace flowtop {

// One realisation of the driving noise bound to a field spec. Every map
// evaluated against the same realisation consumes the identical increment
// table, which is what couples trajectories started at different points.
class FlowRealization {
 public:
  FlowRealization(FieldPtr spec, BrownianPath path);

  const VectorField& spec() const { return *spec_; }
  const FieldPtr& spec_ptr() const { return spec_; }
  const BrownianPath& path() const { return path_; }
  double dt() const { return path_.dt; }
  double horizon() const { return double(path_.n_steps) * path_.dt; }

  // Largest grid step count with step*dt <= t (within grid slack); throws
  // HorizonExceeded past the sampled path.
  long snap_steps(double t) const;
  double snap_time(double t) const { return double(snap_steps(t)) * path_.dt; }

  // Instrumentation: total increment rows served to integrators. Two pushes
  // of n steps each from different starting points add 2n here while reading
  // one shared table.
  long increment_rows_served() const { return reads_->load(); }
  void count_read(long rows) const { reads_->fetch_add(rows, std::memory_order_relaxed); }

 private:
  FieldPtr spec_;
  BrownianPath path_;
  std::shared_ptr<std::atomic<long>> reads_;
};

// Stepwise state of one trajectory, optionally carrying a tangent vector
// through the exact linearisation of each discrete step. Supports resuming,
// which keeps pushes of whole maps across a time ladder linear in the total
// step count.
class FlowCursor {
 public:
  FlowCursor(const FlowRealization& r, const Point& x0);
  FlowCursor(const FlowRealization& r, const TangentVector& v0);

  void advance_steps(long steps);
  void advance_to_time(double t);  // snaps down to the grid

  const Point& point() const { return x_; }
  TangentVector tangent() const;
  long step() const { return step_; }
  double time() const { return double(step_) * r_->dt(); }

 private:
  const FlowRealization* r_;
  Point x_;
  std::optional<Vec> v_;
  long step_ = 0;
};

struct FlowSample {
  Point point;
  double grid_time = 0.0;  // the time actually integrated after snapping
  long steps = 0;
};

// Heun predictor-corrector step for the Stratonovich equation, with a
// projection back to the manifold after predictor and corrector states.
FlowSample flow_map(const FlowRealization& r, const Point& x, double t);

// Derivative flow: v evolves through the exact differential of every discrete
// step (field Jacobians plus the projection derivative), so this is the exact
// linearisation of flow_map up to Jacobian accuracy.
TangentVector tangent_flow(const FlowRealization& r, const TangentVector& v, double t);

// d( flow over [0,s] then [s,s+t], flow over [0,s+t] ) on one grid; identical
// arithmetic, so the expected value is exactly zero.
double compose_check(const FlowRealization& r, const Point& x, double s, double t);

// First grid time in (0, horizon] at which the trajectory leaves W; empty if
// it never does. x is expected to start in W; a start outside reports 0.
std::optional<double> exit_time(const FlowRealization& r, const Point& x, const Region& w,
                                double horizon);

// P(some sample of K exits W within delta) with a Wilson interval. All sample
// points share each trial's realisation; delta must be at least 10*dt so the
// grid resolves the certified window.
ProbabilityEstimate exit_probability_estimate(const FieldPtr& spec, const PointSet& k_samples,
                                              const Region& w, double delta, double dt,
                                              long trials, uint64_t seed, int threads = 0);

// Per-trial first exit times of min over k_samples, integrated to delta_max;
// empty optional for trials that never exit. Shared by the certificate search.
std::vector<std::optional<double>> min_exit_times(const FieldPtr& spec,
                                                  const PointSet& k_samples, const Region& w,
                                                  double delta_max, double dt, long trials,
                                                  uint64_t seed, int threads = 0);

}  // namespace flowtop
