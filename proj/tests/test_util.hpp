#pragma once

#include "flowtop/manifold.hpp"
#include "flowtop/rng.hpp"

#include <initializer_list>

namespace flowtop::testutil {

inline Vec vec_of(std::initializer_list<double> xs) {
  Vec v(long(xs.size()));
  long i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Point pt(std::initializer_list<double> xs) { return Point{vec_of(xs)}; }

inline double uniform01(uint64_t seed, uint64_t trial, uint64_t step, uint64_t coord) {
  const std::array<uint32_t, 4> ctr = {uint32_t(trial), uint32_t(trial >> 32), uint32_t(step),
                                       uint32_t(coord)};
  const std::array<uint32_t, 2> key = {uint32_t(seed), uint32_t(seed >> 32)};
  const auto w = philox4x32(ctr, key);
  return uniform_open_closed(w[0], w[1]) - 0x1.0p-53;
}

// Deterministic point on any of the model manifolds, indexed by (seed, i).
inline Point random_point(const Manifold& m, uint64_t seed, long i) {
  const int a = m.ambient_dim();
  Vec w(a);
  switch (m.kind()) {
    case ManifoldKind::FlatTorus:
      for (int c = 0; c < a; ++c) w[c] = uniform01(seed, i, 0, c);
      return Point{w};
    case ManifoldKind::Hyperbolic2: {
      Vec v(3);
      v << 0.0, standard_normal(seed, i, 0, 0), standard_normal(seed, i, 0, 1);
      const double n = m.norm(v);
      if (n > 2.0) v *= 2.0 / n;
      return m.exp_map(Point{vec_of({1.0, 0.0, 0.0})}, TangentVector{Point{vec_of({1.0, 0.0, 0.0})}, v});
    }
    default:
      for (long attempt = 0;; ++attempt) {
        for (int c = 0; c < a; ++c) w[c] = standard_normal(seed, i, 4 * attempt, c);
        if (m.kind() == ManifoldKind::Euclidean) return Point{Vec(2.0 * w)};
        if (w.norm() >= 0.5) return m.project_to_manifold(Vec(w / w.norm()));
      }
  }
}

// Tangent vector at x with the requested norm; falls back to another draw if
// the projected direction degenerates.
inline TangentVector random_tangent(const Manifold& m, const Point& x, double length,
                                    uint64_t seed, long i) {
  for (long attempt = 0; attempt < 8; ++attempt) {
    Vec w(m.ambient_dim());
    for (int c = 0; c < m.ambient_dim(); ++c)
      w[c] = standard_normal(seed, i, 1 + attempt, c);
    Vec v = m.project_to_tangent(x, w);
    const double n = m.norm(v);
    if (n > 1e-9) return TangentVector{x, Vec(v * (length / n))};
  }
  throw FlowtopError("random_tangent: degenerate draws");
}

}  // namespace flowtop::testutil
