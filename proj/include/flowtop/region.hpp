#pragma once

#include "flowtop/manifold.hpp"

namespace flowtop {

struct Ball {
  Point center;
  double radius = 0.0;
};

// Finite union of closed metric balls; the only region shape the experiments
// need for compact sets and their neighbourhoods.
struct Region {
  std::vector<Ball> balls;

  bool contains(const Manifold& m, const Point& p) const {
    for (const auto& b : balls)
      if (m.distance(b.center, p) <= b.radius) return true;
    return false;
  }
};

// Deterministic sample of a region: each ball contributes its centre plus
// `boundary_samples` points on the bounding sphere. Boundary points are the
// exit-relevant worst cases, so certificates sample them explicitly.
PointSet sample_region(const Manifold& m, const Region& region, int boundary_samples);

// Orthonormal basis of the tangent space at x, as columns.
Mat tangent_basis(const Manifold& m, const Point& x);

}  // namespace flowtop
