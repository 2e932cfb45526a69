#include "flowtop/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <utility>

namespace flowtop {

namespace {

// Undirected domain edges: the ring for loops, deduplicated triangle edges
// for icospheres.
std::vector<std::pair<int, int>> domain_edges(const SphereMap& map) {
  std::vector<std::pair<int, int>> edges;
  const int v = map.vertex_count();
  if (map.n == 1) {
    edges.reserve(std::size_t(v));
    for (int i = 0; i < v; ++i) edges.emplace_back(i, (i + 1) % v);
    return edges;
  }
  edges.reserve(map.faces.size() * 3);
  for (const auto& f : map.faces)
    for (int k = 0; k < 3; ++k) {
      const int a = f[std::size_t(k)];
      const int b = f[std::size_t((k + 1) % 3)];
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

HomotopyResult geodesic_homotopy(const SphereMap& start, const SphereMap& end, int s_steps) {
  if (s_steps < 1) throw ConfigInvalid("homotopy needs at least one stage step");
  if (start.n != end.n || start.vertex_count() != end.vertex_count())
    throw ConfigInvalid("homotopy endpoints discretise different domains");
  if (start.manifold.kind() != end.manifold.kind() ||
      start.manifold.ambient_dim() != end.manifold.ambient_dim())
    throw ConfigInvalid("homotopy endpoints live on different manifolds");

  const Manifold& m = start.manifold;
  const int v = start.vertex_count();

  HomotopyResult result;
  for (int i = 0; i < v; ++i) {
    const double r_inj = m.injectivity_radius(start.image[std::size_t(i)]);
    if (!m.try_log_map(start.image[std::size_t(i)], end.image[std::size_t(i)])) {
      result.failure = HomotopyFailure{
          HomotopyFailureKind::BeyondInjectivityRadius, i,
          m.distance(start.image[std::size_t(i)], end.image[std::size_t(i)]), r_inj};
      return result;
    }
  }

  Homotopy h;
  h.vertices = v;
  h.s_steps = s_steps;
  h.grid.reserve(std::size_t(v) * std::size_t(s_steps + 1));
  for (int i = 0; i < v; ++i)
    for (int j = 0; j <= s_steps; ++j)
      h.grid.push_back(m.geodesic_point(start.image[std::size_t(i)], end.image[std::size_t(i)],
                                        double(j) / double(s_steps)));

  // Every intermediate stage must stay a valid discretisation: adjacent
  // vertices within 0.9 of the injectivity radius (margin below the strict
  // bound against discretisation error).
  for (const auto& [a, b] : domain_edges(start))
    for (int j = 0; j <= s_steps; ++j) {
      const Point& pa = h.at(a, j);
      const Point& pb = h.at(b, j);
      const double bound = 0.9 * m.injectivity_radius(pa);
      const double dist = m.distance(pa, pb);
      if (dist > bound) {
        result.failure = HomotopyFailure{HomotopyFailureKind::ContinuityBroken, a, dist, bound};
        return result;
      }
    }

  result.homotopy = std::move(h);
  return result;
}

ChainResult stepwise_homotopy_chain(const SphereMap& map, const FlowRealization& r, double t,
                                    double delta, int s_steps) {
  if (t < 0.0 || delta <= 0.0) throw ConfigInvalid("chain needs t >= 0 and a positive step");
  if (delta < 10.0 * r.dt() * (1.0 - tol::kGridSnap))
    throw ConfigInvalid("chain step must be at least ten grid steps");
  ChainResult chain;
  if (t == 0.0) return chain;

  std::vector<FlowCursor> cursors;
  cursors.reserve(map.image.size());
  for (const Point& p : map.image) cursors.emplace_back(r, p);

  SphereMap prev = map;
  const int n_segments = int(std::ceil(t / delta - tol::kGridSnap));
  for (int k = 1; k <= n_segments; ++k) {
    const double target = std::min(double(k) * delta, t);
    SphereMap next = prev;
    for (std::size_t i = 0; i < cursors.size(); ++i) {
      cursors[i].advance_to_time(target);
      next.image[i] = cursors[i].point();
    }
    HomotopyResult seg = geodesic_homotopy(prev, next, s_steps);
    if (!seg.ok()) {
      chain.broken = ChainBreak{k - 1, *seg.failure};
      return chain;
    }
    seg.homotopy->time = r.snap_time(target);
    chain.segments.push_back(std::move(*seg.homotopy));
    chain.times.push_back(r.snap_time(target));
    prev = std::move(next);
  }
  return chain;
}

std::optional<BallWitness> null_homotopy_witness(const SphereMap& pushed, const PointSet& k) {
  const Manifold& m = pushed.manifold;
  const double r_inj = m.injectivity_radius(k);
  if (m.diameter(pushed.image) >= 0.5 * r_inj) return std::nullopt;

  // Minimax centre among the vertices; its covering radius is at most the
  // diameter, hence strictly inside a geodesically convex ball.
  const auto& pts = pushed.image;
  std::size_t best = 0;
  double best_cover = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double cover = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j)
      cover = std::max(cover, m.distance(pts[i], pts[j]));
    if (cover < best_cover) {
      best_cover = cover;
      best = i;
    }
  }
  return BallWitness{pts[best], best_cover};
}

std::vector<long> winding_number(const SphereMap& torus_loop) {
  const Manifold& m = torus_loop.manifold;
  if (m.kind() != ManifoldKind::FlatTorus || torus_loop.n != 1)
    throw ConfigInvalid("winding numbers are defined for torus loops");

  const int v = torus_loop.vertex_count();
  Vec acc = Vec::Zero(m.dim());
  for (int i = 0; i < v; ++i) {
    const Point& a = torus_loop.image[std::size_t(i)];
    const Point& b = torus_loop.image[std::size_t((i + 1) % v)];
    const auto lift = m.try_log_map(a, b);
    if (!lift)
      throw ResolutionTooCoarse("loop edge reaches the injectivity radius, lift is ambiguous");
    acc += lift->vec;
  }

  // Edge lifts telescope to lattice translations, so the sum is an integer
  // vector up to accumulated rounding.
  std::vector<long> winding(std::size_t(m.dim()));
  for (int c = 0; c < m.dim(); ++c) {
    const double w = std::round(acc[c]);
    if (std::abs(acc[c] - w) > 1e-6)
      throw FlowtopError("winding sum is not an integer; loop data is inconsistent");
    winding[std::size_t(c)] = long(w);
  }
  return winding;
}

void write_homotopy_csv(std::ostream& os, const std::vector<ChainResult>& chains) {
  int ambient = 0;
  for (const auto& chain : chains)
    for (const auto& seg : chain.segments)
      if (ambient == 0 && !seg.grid.empty()) ambient = int(seg.grid.front().coords.size());

  os << "trial,step,vertex,s_index";
  for (int c = 0; c < ambient; ++c) os << ",x" << c;
  os << "\n";

  char buf[32];
  for (std::size_t trial = 0; trial < chains.size(); ++trial)
    for (std::size_t seg = 0; seg < chains[trial].segments.size(); ++seg) {
      const Homotopy& h = chains[trial].segments[seg];
      for (int i = 0; i < h.vertices; ++i)
        for (int j = 0; j <= h.s_steps; ++j) {
          os << trial << ',' << seg << ',' << i << ',' << j;
          const Vec& x = h.at(i, j).coords;
          for (int c = 0; c < x.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", x[c]);
            os << ',' << buf;
          }
          os << "\n";
        }
    }
}

}  // namespace flowtop
