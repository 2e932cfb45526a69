#pragma once

#include "flowtop/core.hpp"

#include <vector>

namespace flowtop {

// Oriented 2-plane through the origin of the domain sphere's ambient space
// R^(n+1), stored as an orthonormal pair. Its unit circle is a great circle
// of S^n; for n = 1 the only plane is R^2 itself.
struct GrassmannPlane {
  Vec b1;
  Vec b2;
};

struct GreatCircleSample {
  Vec point;    // e(s) on S^n
  Vec tangent;  // unit speed e'(s)
};

// V equally spaced arc-length samples of e(s) = cos(s) b1 + sin(s) b2 with
// their unit tangents. Basis must be orthonormal within 1e-12.
std::vector<GreatCircleSample> great_circle(const GrassmannPlane& plane, int samples);

// The identity parametrization of S^1 as a circle in R^2.
GrassmannPlane identity_circle_plane();

// Plane spanned by two domain unit vectors; throws ConfigInvalid when they
// are parallel within tolerance (the plane through them is not unique).
GrassmannPlane plane_through(const Vec& a, const Vec& b);

// Deterministic low-discrepancy family covering the Grassmannian of 2-planes
// in R^dim: Halton points pushed to Gaussian pairs and orthonormalised.
std::vector<GrassmannPlane> low_discrepancy_planes(int dim, int count);

}  // namespace flowtop
