#include "flowtop/region.hpp"

#include <cmath>

namespace flowtop {

Mat tangent_basis(const Manifold& m, const Point& x) {
  const int d = m.dim();
  const int a = m.ambient_dim();
  Mat basis(a, d);
  switch (m.kind()) {
    case ManifoldKind::Euclidean:
      return Mat::Identity(a, d);
    case ManifoldKind::FlatTorus: {
      // Torus tangent coordinates carry the lattice metric; Gram-Schmidt the
      // coordinate axes under it so skewed lattices still get unit frames.
      for (int j = 0; j < d; ++j) {
        Vec t = Vec::Zero(a);
        t[j] = 1.0;
        for (int i = 0; i < j; ++i) t -= m.inner(basis.col(i), t) * basis.col(i);
        basis.col(j) = t / m.norm(t);
      }
      return basis;
    }
    case ManifoldKind::Sphere:
    case ManifoldKind::Hyperbolic2: {
      // Gram-Schmidt of the ambient axes against the normal direction.
      int col = 0;
      for (int i = 0; i < a && col < d; ++i) {
        Vec cand = Vec::Zero(a);
        cand[i] = 1.0;
        Vec t = m.project_to_tangent(x, cand);
        for (int j = 0; j < col; ++j) t -= m.inner(basis.col(j), t) * basis.col(j);
        const double n = m.norm(t);
        if (n > 1e-8) basis.col(col++) = t / n;
      }
      return basis;
    }
  }
  return basis;
}

PointSet sample_region(const Manifold& m, const Region& region, int boundary_samples) {
  PointSet out;
  const int d = m.dim();
  for (const auto& ball : region.balls) {
    out.push_back(ball.center);
    if (boundary_samples <= 0 || ball.radius <= 0.0) continue;
    const Mat basis = tangent_basis(m, ball.center);
    for (int k = 0; k < boundary_samples; ++k) {
      Vec dir;
      if (d == 1) {
        dir = Vec::Constant(1, k % 2 == 0 ? 1.0 : -1.0);
      } else if (d == 2) {
        const double a = 2.0 * 3.14159265358979323846 * double(k) / double(boundary_samples);
        dir = Vec(2);
        dir << std::cos(a), std::sin(a);
      } else {
        // Golden-spiral directions for d = 3; deterministic and close to
        // evenly spread.
        const double golden = 2.399963229728653;
        const double z = 1.0 - 2.0 * (double(k) + 0.5) / double(boundary_samples);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        dir = Vec(3);
        dir << r * std::cos(golden * k), r * std::sin(golden * k), z;
      }
      TangentVector v{ball.center, basis * (ball.radius * dir)};
      out.push_back(m.exp_map(ball.center, v));
    }
  }
  return out;
}

}  // namespace flowtop
