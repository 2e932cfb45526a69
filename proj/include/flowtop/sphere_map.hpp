#pragma once

#include "flowtop/flow.hpp"
#include "flowtop/manifold.hpp"

#include <array>

namespace flowtop {

// Discretised map sigma : S^n -> M for n = 1 (closed polyline over equally
// spaced circle vertices) or n = 2 (icosphere triangulation). Domain vertices
// are unit vectors in R^(n+1); image vertices live on the target manifold.
struct SphereMap {
  int n = 1;
  Manifold manifold;
  std::vector<Vec> domain;
  PointSet image;
  std::vector<std::array<int, 3>> faces;  // n = 2 only

  int vertex_count() const { return int(image.size()); }
};

struct IcosphereMesh {
  std::vector<Vec> vertices;  // unit vectors in R^3
  std::vector<std::array<int, 3>> faces;
};

// Icosahedron subdivided `level` times, vertices normalised to the unit
// sphere. Deterministic, so meshes used as fixtures reproduce exactly.
IcosphereMesh icosphere(int level);

// Geodesic circle of radius rho around `center`, traced through the first two
// tangent basis directions. Works on every model manifold with rho below the
// injectivity radius.
SphereMap make_geodesic_circle_loop(const Manifold& m, const Point& center, double rho,
                                    int vertices);

// Loop running `winding` times around the torus generators: vertex k sits at
// frac(offset + (k/V) * winding).
SphereMap make_torus_winding_loop(const Manifold& torus, const std::vector<long>& winding,
                                  int vertices, const Point& offset);

// Icosphere image c + rho * u in euclidean ambient space (n = 2).
SphereMap make_icosphere_map(const Manifold& euclidean3, const Point& center, double rho,
                             int level);

// Identity-style map S^2 -> S^2: image vertex is the domain vertex scaled to
// the sphere radius (degree one).
SphereMap make_icosphere_identity(const Manifold& sphere2, int level);

// Largest image edge (consecutive vertices for n = 1, triangle edges for
// n = 2); fixture constructors enforce the resolution condition
// max_edge <= 0.5 * R_inj at build time.
double max_edge_length(const SphereMap& map);

// Piecewise interpolation of the image at an arbitrary domain unit vector:
// polyline blend for n = 1, barycentric blend over the containing triangle
// for n = 2, projected back to the manifold.
Point interpolate_map(const SphereMap& map, const Vec& domain_unit);

// Applies the flow realisation to every image vertex at time t (domain and
// faces unchanged).
SphereMap push_map(const SphereMap& map, const FlowRealization& r, double t);

}  // namespace flowtop
