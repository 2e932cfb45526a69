#pragma once

#include "flowtop/core.hpp"

#include <optional>

namespace flowtop {

enum class ManifoldKind { Euclidean, Sphere, FlatTorus, Hyperbolic2 };

// Model Riemannian manifolds in explicit ambient coordinates:
//   Euclidean    R^d, points are plain vectors.
//   Sphere       S^d of radius r in R^(d+1), |x| = r.
//   FlatTorus    R^d / lattice, points stored in lattice coordinates reduced
//                to [0,1)^d; tangent vectors in lattice coordinates with the
//                metric pulled back through the basis matrix.
//   Hyperbolic2  upper hyperboloid sheet in R^3 with the Minkowski form
//                <x,x> = -x0^2 + x1^2 + x2^2 = -1, x0 > 0.
//
// All maps are the closed-form textbook expressions; the only numerics are
// stability rewrites near zero distance.
class Manifold {
 public:
  // Zero-dimensional placeholder so aggregates holding a Manifold can be
  // default-constructed; every real instance comes from a factory below.
  Manifold() = default;

  static Manifold euclidean(int dim);
  static Manifold sphere(int dim, double radius = 1.0);
  static Manifold flat_torus(int dim);            // unit lattice
  static Manifold flat_torus(const Mat& basis);   // columns are lattice vectors
  static Manifold hyperbolic2();

  ManifoldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int ambient_dim() const { return ambient_dim_; }
  double radius() const { return radius_; }
  const Mat& lattice() const { return lattice_; }
  // Characteristic length used to scale tolerances and difference steps.
  double scale() const { return scale_; }
  std::string name() const;

  // Riemannian inner product on tangent vectors (constant bilinear form for
  // each of the four models, so no base point is needed).
  double inner(const Vec& u, const Vec& v) const;
  double norm(const Vec& v) const;

  Point exp_map(const Point& x, const TangentVector& v) const;
  // Throws BeyondInjectivityRadius when d(x,y) >= injectivity_radius(x).
  TangentVector log_map(const Point& x, const Point& y) const;
  // Same computation, empty result instead of a throw; for callers that treat
  // unreachable pairs as data rather than failure.
  std::optional<TangentVector> try_log_map(const Point& x, const Point& y) const;
  double distance(const Point& x, const Point& y) const;
  // Unit-interval geodesic: s=0 and s=1 return the inputs bit for bit.
  Point geodesic_point(const Point& x, const Point& y, double s) const;
  double injectivity_radius(const Point& x) const;
  double injectivity_radius(const PointSet& set) const;
  // Nearest-point projection of an ambient vector; throws
  // ProjectionIllConditioned near the singular set (sphere centre, light cone).
  Point project_to_manifold(const Vec& ambient) const;
  Vec project_to_tangent(const Point& x, const Vec& ambient) const;
  // Exact derivative of project_to_manifold at a pre-projection ambient point;
  // the flow integrator pushes tangent vectors through this so that the
  // derivative flow is the exact linearisation of the discrete step.
  Vec projection_derivative(const Vec& pre_projection, const Vec& w) const;
  double diameter(const PointSet& set) const;
  double constraint_residual(const Point& x) const;
  double tangent_residual(const Point& x, const Vec& v) const;

 private:
  ManifoldKind kind_ = ManifoldKind::Euclidean;
  int dim_ = 0;
  int ambient_dim_ = 0;
  double radius_ = 1.0;     // sphere only
  Mat lattice_;             // torus only
  Mat lattice_gram_;        // torus metric B^T B
  double shortest_lattice_ = 0.0;
  double scale_ = 1.0;
};

// Minkowski bilinear form on R^3 with signature (-,+,+).
double minkowski_inner(const Vec& a, const Vec& b);

}  // namespace flowtop
