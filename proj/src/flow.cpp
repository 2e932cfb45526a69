#include "flowtop/flow.hpp"

#include "flowtop/parallel.hpp"

#include <cmath>

namespace flowtop {

namespace {

// Combined increment field F(x) = A(x) dt + sum_e X_e(x) dB_e and its
// directional derivative along v.
Vec field_increment(const VectorField& f, const Vec& x, double dt, const double* db) {
  Vec out = f.drift(x) * dt;
  for (int e = 0; e < f.noise_dim(); ++e) out += f.diffusion(e, x) * db[e];
  return out;
}

Vec field_increment_derivative(const VectorField& f, const Vec& x, const Vec& v, double dt,
                               const double* db) {
  Vec out = f.drift_derivative(x, v) * dt;
  for (int e = 0; e < f.noise_dim(); ++e) out += f.diffusion_derivative(e, x, v) * db[e];
  return out;
}

}  // namespace

FlowRealization::FlowRealization(FieldPtr spec, BrownianPath path)
    : spec_(std::move(spec)),
      path_(std::move(path)),
      reads_(std::make_shared<std::atomic<long>>(0)) {
  if (!spec_) throw ConfigInvalid("flow realisation needs a field");
  if (path_.m != spec_->noise_dim())
    throw ConfigInvalid("noise dimension of the path does not match the field");
}

long FlowRealization::snap_steps(double t) const {
  if (t < 0.0) throw HorizonExceeded("negative time requested");
  const long k = long(std::floor(t / path_.dt + tol::kGridSnap));
  if (k > path_.n_steps)
    throw HorizonExceeded("time " + std::to_string(t) + " beyond the sampled horizon " +
                          std::to_string(horizon()));
  return k;
}

FlowCursor::FlowCursor(const FlowRealization& r, const Point& x0) : r_(&r), x_(x0) {}

FlowCursor::FlowCursor(const FlowRealization& r, const TangentVector& v0)
    : r_(&r), x_(v0.base), v_(v0.vec) {}

TangentVector FlowCursor::tangent() const {
  if (!v_) throw FlowtopError("cursor does not carry a tangent vector");
  return TangentVector{x_, *v_};
}

void FlowCursor::advance_steps(long steps) {
  if (steps <= 0) return;
  const auto& path = r_->path();
  const auto& f = r_->spec();
  const Manifold& m = f.manifold();
  const double dt = path.dt;
  if (step_ + steps > path.n_steps) throw HorizonExceeded("cursor advanced past the horizon");

  double db[kMaxAmbientDim];
  for (long k = step_; k < step_ + steps; ++k) {
    for (int e = 0; e < path.m; ++e) db[e] = path.increments(k, e);

    const Vec f1 = field_increment(f, x_.coords, dt, db);
    const Vec pre_pred = x_.coords + f1;
    const Point pred = m.project_to_manifold(pre_pred);

    Vec g1, v_pred;
    if (v_) {
      g1 = field_increment_derivative(f, x_.coords, *v_, dt, db);
      v_pred = m.projection_derivative(pre_pred, *v_ + g1);
    }

    const Vec f2 = field_increment(f, pred.coords, dt, db);
    const Vec pre_corr = x_.coords + 0.5 * (f1 + f2);
    const Point next = m.project_to_manifold(pre_corr);

    if (v_) {
      const Vec g2 = field_increment_derivative(f, pred.coords, v_pred, dt, db);
      v_ = m.projection_derivative(pre_corr, *v_ + 0.5 * (g1 + g2));
    }
    x_ = next;
  }
  r_->count_read(steps);
  step_ += steps;
}

void FlowCursor::advance_to_time(double t) {
  const long target = r_->snap_steps(t);
  if (target < step_) throw HorizonExceeded("cursor cannot run backwards");
  advance_steps(target - step_);
}

FlowSample flow_map(const FlowRealization& r, const Point& x, double t) {
  FlowCursor c(r, x);
  c.advance_to_time(t);
  return FlowSample{c.point(), c.time(), c.step()};
}

TangentVector tangent_flow(const FlowRealization& r, const TangentVector& v, double t) {
  FlowCursor c(r, v);
  c.advance_to_time(t);
  return c.tangent();
}

double compose_check(const FlowRealization& r, const Point& x, double s, double t) {
  FlowCursor staged(r, x);
  staged.advance_to_time(s);
  const long mid = staged.step();
  const long end = r.snap_steps(s + t);
  staged.advance_steps(end - mid);

  FlowCursor direct(r, x);
  direct.advance_steps(end);
  return r.spec().manifold().distance(staged.point(), direct.point());
}

std::optional<double> exit_time(const FlowRealization& r, const Point& x, const Region& w,
                                double horizon) {
  const Manifold& m = r.spec().manifold();
  if (!w.contains(m, x)) return 0.0;
  const long n = r.snap_steps(horizon);
  FlowCursor c(r, x);
  for (long k = 1; k <= n; ++k) {
    c.advance_steps(1);
    if (!w.contains(m, c.point())) return c.time();
  }
  return std::nullopt;
}

std::vector<std::optional<double>> min_exit_times(const FieldPtr& spec,
                                                  const PointSet& k_samples, const Region& w,
                                                  double delta_max, double dt, long trials,
                                                  uint64_t seed, int threads) {
  std::vector<std::optional<double>> out(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](long trial) {
    BrownianPath path =
        sample_brownian_path(spec->noise_dim(), delta_max, dt, seed, trial);
    FlowRealization r(spec, std::move(path));
    const Manifold& m = spec->manifold();
    const long n = r.path().n_steps;

    std::vector<FlowCursor> cursors;
    cursors.reserve(k_samples.size());
    for (const auto& p : k_samples) cursors.emplace_back(r, p);

    std::optional<double> first;
    for (long k = 1; k <= n && !first; ++k) {
      for (auto& c : cursors) {
        c.advance_steps(1);
        if (!w.contains(m, c.point())) {
          first = c.time();
          break;
        }
      }
    }
    out[static_cast<std::size_t>(trial)] = first;
  });
  return out;
}

ProbabilityEstimate exit_probability_estimate(const FieldPtr& spec, const PointSet& k_samples,
                                              const Region& w, double delta, double dt,
                                              long trials, uint64_t seed, int threads) {
  if (delta < 10.0 * dt - tol::kGridSnap)
    throw ConfigInvalid("exit window delta must be at least 10*dt");
  for (const auto& p : k_samples)
    if (!w.contains(spec->manifold(), p))
      throw ConfigInvalid("every sample of K must start inside W");
  const auto times = min_exit_times(spec, k_samples, w, delta, dt, trials, seed, threads);
  long hits = 0;
  for (const auto& t : times)
    if (t && *t <= delta + tol::kGridSnap) ++hits;
  return wilson_interval(hits, trials);
}

}  // namespace flowtop
