#include "flowtop/moment.hpp"

#include "flowtop/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace flowtop {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Relative slack of the diameter inequality, covering the quadrature error
// of the circle lengths.
constexpr double kQuadratureTol = 1e-3;
constexpr long kTrialBlock = 64;

// Central difference over the two neighbours of loop vertex k, an O(ds^2)
// estimate of the composite tangent at that vertex.
TangentVector loop_vertex_tangent(const SphereMap& map, int k) {
  const Manifold& m = map.manifold;
  const int v = map.vertex_count();
  const Point& prev = map.image[std::size_t((k + v - 1) % v)];
  const Point& here = map.image[std::size_t(k)];
  const Point& next = map.image[std::size_t((k + 1) % v)];
  const double ds = 2.0 * kPi / double(v);
  const Vec d = (m.log_map(here, next).vec - m.log_map(here, prev).vec) / (2.0 * ds);
  return TangentVector{here, d};
}

// Differential of the interpolated map at domain point u along the unit
// domain direction dir, by a symmetric step of angle h along the domain
// great circle through u and dir.
TangentVector mesh_directional_tangent(const SphereMap& map, const Vec& u, const Vec& dir,
                                       double h) {
  const Manifold& m = map.manifold;
  const Point p0 = interpolate_map(map, u);
  const Point plus = interpolate_map(map, std::cos(h) * u + std::sin(h) * dir);
  const Point minus = interpolate_map(map, std::cos(h) * u - std::sin(h) * dir);
  const Vec d = (m.log_map(p0, plus).vec - m.log_map(p0, minus).vec) / (2.0 * h);
  return TangentVector{p0, d};
}

double mean_domain_edge_angle(const SphereMap& map) {
  double sum = 0.0;
  long count = 0;
  for (const auto& f : map.faces)
    for (int k = 0; k < 3; ++k) {
      const Vec& a = map.domain[std::size_t(f[std::size_t(k)])];
      const Vec& b = map.domain[std::size_t(f[std::size_t((k + 1) % 3)])];
      sum += std::acos(std::clamp(a.dot(b), -1.0, 1.0));
      ++count;
    }
  return count > 0 ? sum / double(count) : 0.0;
}

// Orthonormal pair spanning the tangent plane of S^2 at u.
std::pair<Vec, Vec> domain_tangent_pair(const Vec& u) {
  int axis = 0;
  for (int c = 1; c < u.size(); ++c)
    if (std::abs(u[c]) < std::abs(u[axis])) axis = c;
  Vec d1 = Vec::Zero(u.size());
  d1[axis] = 1.0;
  d1 -= d1.dot(u) * u;
  d1 /= d1.norm();
  Vec d2(3);
  d2 << u[1] * d1[2] - u[2] * d1[1], u[2] * d1[0] - u[0] * d1[2], u[0] * d1[1] - u[1] * d1[0];
  return {d1, d2};
}

std::pair<std::size_t, std::size_t> diameter_pair(const Manifold& m, const PointSet& pts) {
  std::pair<std::size_t, std::size_t> best{0, 0};
  double best_d = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = m.distance(pts[i], pts[j]);
      if (d > best_d) {
        best_d = d;
        best = {i, j};
      }
    }
  return best;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t j = 1; j < t.size(); ++j)
    sum += 0.5 * (y[j] + y[j - 1]) * (t[j] - t[j - 1]);
  return sum;
}

}  // namespace

CompactTangentSet tangent_set_from_map(const SphereMap& map) {
  const Manifold& m = map.manifold;
  CompactTangentSet set;
  std::vector<TangentVector> raw;

  if (map.n == 1) {
    for (int k = 0; k < map.vertex_count(); ++k) raw.push_back(loop_vertex_tangent(map, k));
    set.description = "loop tangent directions, central differences over " +
                      std::to_string(map.vertex_count()) + " vertices";
  } else {
    const double h = 0.5 * mean_domain_edge_angle(map);
    for (const Vec& u : map.domain) {
      const auto [d1, d2] = domain_tangent_pair(u);
      raw.push_back(mesh_directional_tangent(map, u, d1, h));
      raw.push_back(mesh_directional_tangent(map, u, d2, h));
    }
    set.description = "mesh tangent directions, two per vertex over " +
                      std::to_string(map.vertex_count()) + " vertices";
  }

  for (const TangentVector& v : raw) {
    const double len = m.norm(v.vec);
    if (len < 1e-12) continue;
    set.samples.push_back(TangentVector{v.base, v.vec / len});
    set.scales.push_back(len);
  }
  if (set.samples.empty()) throw ConfigInvalid("map has no nonzero tangent directions");
  return set;
}

CircleTangentFrame circle_tangent_frame(const SphereMap& map, const GrassmannPlane& plane,
                                        int samples) {
  CircleTangentFrame frame;
  if (map.n == 1) {
    frame.ds = 2.0 * kPi / double(map.vertex_count());
    for (int k = 0; k < map.vertex_count(); ++k)
      frame.tangents.push_back(loop_vertex_tangent(map, k));
    return frame;
  }

  const auto circle = great_circle(plane, samples);
  frame.ds = 2.0 * kPi / double(samples);
  const double h = 0.5 * frame.ds;
  for (const auto& s : circle)
    frame.tangents.push_back(mesh_directional_tangent(map, s.point, s.tangent, h));
  return frame;
}

double circle_length_under_flow(const CircleTangentFrame& frame, const FlowRealization& r,
                                double t) {
  const Manifold& m = r.spec().manifold();
  double length = 0.0;
  for (const TangentVector& v : frame.tangents)
    length += m.norm(tangent_flow(r, v, t).vec) * frame.ds;
  return length;
}

double circle_length_under_flow(const SphereMap& map, const FlowRealization& r, double t,
                                const GrassmannPlane& plane, int samples) {
  return circle_length_under_flow(circle_tangent_frame(map, plane, samples), r, t);
}

DiameterBoundCheck diameter_bound_check(const SphereMap& map, const FlowRealization& r, double t,
                                        const std::vector<CircleTangentFrame>& frames) {
  if (frames.empty()) throw ConfigInvalid("diameter bound needs at least one circle");
  const Manifold& m = map.manifold;
  const SphereMap pushed = push_map(map, r, t);

  DiameterBoundCheck check;
  const auto [i, j] = diameter_pair(m, pushed.image);
  check.diam = m.distance(pushed.image[i], pushed.image[j]);

  double sup = 0.0;
  for (const auto& frame : frames)
    sup = std::max(sup, circle_length_under_flow(frame, r, t));

  // The continuous bound comes from a circle through the two domain points
  // whose images realise the diameter; add that circle so the sampled family
  // always contains it.
  if (map.n == 2 && i != j) {
    try {
      const auto plane = plane_through(map.domain[i], map.domain[j]);
      const int samples = frames.front().tangents.empty()
                              ? 64
                              : int(frames.front().tangents.size());
      sup = std::max(sup, circle_length_under_flow(map, r, t, plane, samples));
    } catch (const ConfigInvalid&) {
      // Parallel domain vertices span no unique plane; the sampled family
      // alone stands.
    }
  }

  check.half_sup_length = 0.5 * sup;
  check.holds = check.diam <= check.half_sup_length * (1.0 + kQuadratureTol) + 1e-12;
  return check;
}

DiameterBoundCheck diameter_bound_check(const SphereMap& map, const FlowRealization& r, double t,
                                        const std::vector<GrassmannPlane>& circles,
                                        int samples) {
  std::vector<CircleTangentFrame> frames;
  frames.reserve(circles.size());
  for (const auto& plane : circles) frames.push_back(circle_tangent_frame(map, plane, samples));
  return diameter_bound_check(map, r, t, frames);
}

MomentIntegralReport moment_integral_estimate(const FieldPtr& spec, const CompactTangentSet& l,
                                              double t_max, double dt, long trials,
                                              uint64_t seed, int threads, int grid_points) {
  if (l.samples.empty()) throw ConfigInvalid("tangent set is empty");
  if (t_max < 10.0 * dt) throw ConfigInvalid("moment horizon must cover at least ten steps");
  if (trials < 1) throw ConfigInvalid("moment estimate needs at least one trial");

  const Manifold& m = spec->manifold();
  const long n_steps = long(std::llround(std::ceil(t_max / dt - tol::kGridSnap)));
  const int n_out = int(std::min<long>(grid_points, n_steps + 1));
  std::vector<long> idx;
  idx.reserve(std::size_t(n_out));
  for (int j = 0; j < n_out; ++j) {
    const long k = std::llround(double(j) * double(n_steps) / double(n_out - 1));
    if (idx.empty() || k > idx.back()) idx.push_back(k);
  }

  const std::size_t n_v = l.samples.size();
  const std::size_t slots = idx.size() * n_v;

  using Acc = std::vector<MeanAccumulator>;
  auto blocks = parallel_blocks<Acc>(
      trials, kTrialBlock, threads, [&](long trial, Acc& acc) {
        if (acc.empty()) acc.resize(slots);
        const FlowRealization r(spec,
                                sample_brownian_path(spec->noise_dim(), t_max, dt, seed, trial));
        for (std::size_t i = 0; i < n_v; ++i) {
          FlowCursor cursor(r, l.samples[i]);
          for (std::size_t j = 0; j < idx.size(); ++j) {
            cursor.advance_steps(idx[j] - cursor.step());
            acc[j * n_v + i].add(m.norm(cursor.tangent().vec));
          }
        }
      });

  Acc total(slots);
  for (const Acc& acc : blocks) {
    if (acc.empty()) continue;
    for (std::size_t s = 0; s < slots; ++s) total[s].merge(acc[s]);
  }

  MomentIntegralReport report;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    report.t_grid.push_back(double(idx[j]) * dt);
    double best = -1.0;
    double best_err = 0.0;
    for (std::size_t i = 0; i < n_v; ++i) {
      const MeanAccumulator& a = total[j * n_v + i];
      const double value = l.scales[i] * a.mean;
      if (value > best) {
        best = value;
        best_err = l.scales[i] * a.stderr_of_mean();
      }
    }
    report.integrand.push_back(best);
    report.stderrs.push_back(best_err);
  }

  report.truncated_integral = trapezoid(report.t_grid, report.integrand);

  // Log-linear fit over the last quarter of the grid decides whether the
  // curve is decaying fast enough for the improper integral to close.
  const std::size_t tail_start = report.t_grid.size() - std::max<std::size_t>(
      2, report.t_grid.size() / 4);
  std::vector<double> ts, logs;
  bool positive = true;
  for (std::size_t j = tail_start; j < report.t_grid.size(); ++j) {
    if (report.integrand[j] <= 0.0) {
      positive = false;
      break;
    }
    ts.push_back(report.t_grid[j]);
    logs.push_back(std::log(report.integrand[j]));
  }
  if (positive && ts.size() >= 2) {
    const LinearFit fit = fit_line(ts, logs);
    report.tail_slope = fit.slope;
    if (fit.slope < 0.0) {
      const double end_value = std::exp(fit.intercept + fit.slope * report.t_grid.back());
      const double tail = end_value / (-fit.slope);
      report.converged = tail < 0.05 * report.truncated_integral;
    }
  } else if (!positive) {
    // A vanished integrand integrates to zero from here on.
    report.tail_slope = 0.0;
    report.converged = true;
  }
  return report;
}

MeanEstimate expected_diameter(const FieldPtr& spec, const SphereMap& map, double t, double dt,
                               long trials, uint64_t seed, int threads) {
  const DiameterTrace trace =
      expected_diameter_trace(spec, map, {t}, dt, trials, seed, threads);
  return MeanEstimate{trace.means.front(), trace.stderrs.front(), trials};
}

DiameterTrace expected_diameter_trace(const FieldPtr& spec, const SphereMap& map,
                                      const std::vector<double>& t_grid, double dt, long trials,
                                      uint64_t seed, int threads) {
  if (t_grid.empty()) throw ConfigInvalid("diameter trace needs at least one time");
  for (std::size_t j = 0; j < t_grid.size(); ++j)
    if (t_grid[j] < 0.0 || (j > 0 && t_grid[j] <= t_grid[j - 1]))
      throw ConfigInvalid("diameter trace grid must be increasing and nonnegative");
  if (trials < 1) throw ConfigInvalid("diameter trace needs at least one trial");

  const Manifold& m = spec->manifold();
  const double horizon = t_grid.back();

  using Acc = std::vector<MeanAccumulator>;
  auto blocks = parallel_blocks<Acc>(
      trials, kTrialBlock, threads, [&](long trial, Acc& acc) {
        if (acc.empty()) acc.resize(t_grid.size());
        const FlowRealization r(
            spec, sample_brownian_path(spec->noise_dim(), std::max(horizon, dt), dt, seed,
                                       trial));
        std::vector<FlowCursor> cursors;
        cursors.reserve(map.image.size());
        for (const Point& p : map.image) cursors.emplace_back(r, p);
        PointSet snapshot(map.image.size());
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
          for (std::size_t i = 0; i < cursors.size(); ++i) {
            cursors[i].advance_to_time(t_grid[j]);
            snapshot[i] = cursors[i].point();
          }
          acc[j].add(m.diameter(snapshot));
        }
      });

  DiameterTrace trace;
  trace.times = t_grid;
  std::vector<MeanAccumulator> total(t_grid.size());
  for (const auto& acc : blocks) {
    if (acc.empty()) continue;
    for (std::size_t j = 0; j < total.size(); ++j) total[j].merge(acc[j]);
  }
  for (const auto& a : total) {
    trace.means.push_back(a.mean);
    trace.stderrs.push_back(a.stderr_of_mean());
  }
  return trace;
}

std::vector<double> find_shrinking_times(const FieldPtr& spec, const SphereMap& map,
                                         const std::vector<double>& t_grid, double dt,
                                         long trials, double threshold, uint64_t seed,
                                         int threads) {
  const DiameterTrace trace =
      expected_diameter_trace(spec, map, t_grid, dt, trials, seed, threads);
  std::vector<double> times;
  for (std::size_t j = 0; j < trace.times.size(); ++j)
    if (trace.means[j] + 2.0 * trace.stderrs[j] < threshold) times.push_back(trace.times[j]);
  return times;
}

void write_integrand_csv(std::ostream& os, const MomentIntegralReport& report) {
  os << "t,integrand\n";
  char buf[32];
  for (std::size_t j = 0; j < report.t_grid.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", report.t_grid[j]);
    os << buf;
    std::snprintf(buf, sizeof buf, "%.17g", report.integrand[j]);
    os << ',' << buf << "\n";
  }
}

}  // namespace flowtop
