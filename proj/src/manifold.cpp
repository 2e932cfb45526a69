#include "flowtop/manifold.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace flowtop {

namespace {

constexpr double kTiny = 1e-12;

double wrap_unit(double c) {
  const double f = c - std::floor(c);
  return f < 1.0 ? f : 0.0;  // floor can land exactly on 1.0 for small negatives
}

}  // namespace

BeyondInjectivityRadius::BeyondInjectivityRadius(double distance_, double radius_)
    : FlowtopError("distance " + std::to_string(distance_) +
                   " is not below the injectivity radius " + std::to_string(radius_)),
      distance(distance_),
      radius(radius_) {}

double minkowski_inner(const Vec& a, const Vec& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Manifold Manifold::euclidean(int dim) {
  if (dim < 1 || dim > kMaxAmbientDim)
    throw ConfigInvalid("euclidean dimension out of range");
  Manifold m;
  m.kind_ = ManifoldKind::Euclidean;
  m.dim_ = dim;
  m.ambient_dim_ = dim;
  m.scale_ = 1.0;
  return m;
}

Manifold Manifold::sphere(int dim, double radius) {
  if (dim < 1 || dim + 1 > kMaxAmbientDim)
    throw ConfigInvalid("sphere dimension out of range");
  if (!(radius > 0.0)) throw ConfigInvalid("sphere radius must be positive");
  Manifold m;
  m.kind_ = ManifoldKind::Sphere;
  m.dim_ = dim;
  m.ambient_dim_ = dim + 1;
  m.radius_ = radius;
  m.scale_ = radius;
  return m;
}

Manifold Manifold::flat_torus(int dim) {
  Mat basis = Mat::Identity(dim, dim);
  return flat_torus(basis);
}

Manifold Manifold::flat_torus(const Mat& basis) {
  const int dim = int(basis.rows());
  if (dim < 1 || dim > kMaxAmbientDim || basis.cols() != dim)
    throw ConfigInvalid("torus lattice must be a square matrix of ambient size");
  if (std::abs(basis.determinant()) < kTiny)
    throw ConfigInvalid("torus lattice basis is singular");
  Manifold m;
  m.kind_ = ManifoldKind::FlatTorus;
  m.dim_ = dim;
  m.ambient_dim_ = dim;
  m.lattice_ = basis;
  m.lattice_gram_ = basis.transpose() * basis;

  // Shortest nonzero lattice vector by brute force over a small index box;
  // exact for the mildly skewed bases supported here.
  double best = std::numeric_limits<double>::infinity();
  Vec k(dim);
  std::vector<int> idx(dim, -3);
  for (;;) {
    bool zero = true;
    for (int i = 0; i < dim; ++i) {
      k[i] = idx[i];
      if (idx[i] != 0) zero = false;
    }
    if (!zero) best = std::min(best, double((basis * k).norm()));
    int carry = 0;
    for (; carry < dim; ++carry) {
      if (++idx[carry] <= 3) break;
      idx[carry] = -3;
    }
    if (carry == dim) break;
  }
  m.shortest_lattice_ = best;
  m.scale_ = best;
  return m;
}

Manifold Manifold::hyperbolic2() {
  Manifold m;
  m.kind_ = ManifoldKind::Hyperbolic2;
  m.dim_ = 2;
  m.ambient_dim_ = 3;
  m.scale_ = 1.0;
  return m;
}

std::string Manifold::name() const {
  switch (kind_) {
    case ManifoldKind::Euclidean: return "euclidean" + std::to_string(dim_);
    case ManifoldKind::Sphere: return "sphere" + std::to_string(dim_);
    case ManifoldKind::FlatTorus: return "flat_torus" + std::to_string(dim_);
    case ManifoldKind::Hyperbolic2: return "hyperbolic2";
  }
  return "unknown";
}

double Manifold::inner(const Vec& u, const Vec& v) const {
  switch (kind_) {
    case ManifoldKind::FlatTorus: return u.dot(lattice_gram_ * v);
    case ManifoldKind::Hyperbolic2: return minkowski_inner(u, v);
    default: return u.dot(v);
  }
}

double Manifold::norm(const Vec& v) const {
  const double q = inner(v, v);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

double Manifold::constraint_residual(const Point& x) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return 0.0;
    case ManifoldKind::Sphere:
      return std::abs(x.coords.norm() - radius_);
    case ManifoldKind::FlatTorus: {
      double r = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double c = x.coords[i];
        if (c < 0.0) r = std::max(r, -c);
        if (c >= 1.0) r = std::max(r, c - 1.0 + kTiny);
      }
      return r;
    }
    case ManifoldKind::Hyperbolic2: {
      if (x.coords[0] <= 0.0) return std::abs(x.coords[0]) + 1.0;
      return std::abs(minkowski_inner(x.coords, x.coords) + 1.0);
    }
  }
  return 0.0;
}

double Manifold::tangent_residual(const Point& x, const Vec& v) const {
  switch (kind_) {
    case ManifoldKind::Sphere:
      return std::abs(x.coords.dot(v)) / radius_;
    case ManifoldKind::Hyperbolic2:
      return std::abs(minkowski_inner(x.coords, v));
    default:
      return 0.0;
  }
}

Point Manifold::exp_map(const Point& x, const TangentVector& v) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return Point{x.coords + v.vec};
    case ManifoldKind::FlatTorus: {
      Vec c = x.coords + v.vec;
      for (int i = 0; i < dim_; ++i) c[i] = wrap_unit(c[i]);
      return Point{c};
    }
    case ManifoldKind::Sphere: {
      const double len = v.vec.norm();           // = r * angle
      const double theta = len / radius_;
      if (theta < kTiny) return project_to_manifold(x.coords + v.vec);
      return Point{std::cos(theta) * x.coords +
                   (radius_ * std::sin(theta) / len) * v.vec};
    }
    case ManifoldKind::Hyperbolic2: {
      const double q = minkowski_inner(v.vec, v.vec);
      const double len = q > 0.0 ? std::sqrt(q) : 0.0;
      if (len < kTiny) return project_to_manifold(x.coords + v.vec);
      return Point{std::cosh(len) * x.coords + (std::sinh(len) / len) * v.vec};
    }
  }
  return x;
}

double Manifold::distance(const Point& x, const Point& y) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return (y.coords - x.coords).norm();
    case ManifoldKind::FlatTorus: {
      // Brute force over the 3^d nearest deck translates; exact once both
      // points are reduced to the fundamental domain.
      const Vec delta = y.coords - x.coords;
      double best = std::numeric_limits<double>::infinity();
      Vec cand(dim_);
      std::vector<int> idx(dim_, -1);
      for (;;) {
        for (int i = 0; i < dim_; ++i) cand[i] = delta[i] + idx[i];
        best = std::min(best, double((lattice_ * cand).norm()));
        int carry = 0;
        for (; carry < dim_; ++carry) {
          if (++idx[carry] <= 1) break;
          idx[carry] = -1;
        }
        if (carry == dim_) break;
      }
      return best;
    }
    case ManifoldKind::Sphere: {
      const double c = x.coords.dot(y.coords) / (radius_ * radius_);
      const Vec w = y.coords - c * x.coords;
      return radius_ * std::atan2(w.norm() / radius_, c);
    }
    case ManifoldKind::Hyperbolic2: {
      // cosh d = -<x,y>; computed through the difference vector so that the
      // small-distance cancellation stays benign.
      const Vec delta = y.coords - x.coords;
      const double cm1 = std::max(0.0, -minkowski_inner(x.coords, delta));
      return std::log1p(cm1 + std::sqrt(cm1 * (cm1 + 2.0)));
    }
  }
  return 0.0;
}

std::optional<TangentVector> Manifold::try_log_map(const Point& x, const Point& y) const {
  const double r_inj = injectivity_radius(x);
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return TangentVector{x, y.coords - x.coords};
    case ManifoldKind::FlatTorus: {
      const Vec delta = y.coords - x.coords;
      double best = std::numeric_limits<double>::infinity();
      Vec best_v(dim_);
      Vec cand(dim_);
      std::vector<int> idx(dim_, -1);
      for (;;) {
        for (int i = 0; i < dim_; ++i) cand[i] = delta[i] + idx[i];
        const double len = (lattice_ * cand).norm();
        if (len < best) {
          best = len;
          best_v = cand;
        }
        int carry = 0;
        for (; carry < dim_; ++carry) {
          if (++idx[carry] <= 1) break;
          idx[carry] = -1;
        }
        if (carry == dim_) break;
      }
      if (best >= r_inj) return std::nullopt;
      return TangentVector{x, best_v};
    }
    case ManifoldKind::Sphere: {
      const double c = x.coords.dot(y.coords) / (radius_ * radius_);
      const Vec w = y.coords - c * x.coords;
      const double wn = w.norm();
      const double d = radius_ * std::atan2(wn / radius_, c);
      if (d >= r_inj) return std::nullopt;
      if (d < kTiny * radius_)
        return TangentVector{x, project_to_tangent(x, y.coords - x.coords)};
      return TangentVector{x, (d / wn) * w};
    }
    case ManifoldKind::Hyperbolic2: {
      const Vec delta = y.coords - x.coords;
      const double cm1 = std::max(0.0, -minkowski_inner(x.coords, delta));
      const double d = std::log1p(cm1 + std::sqrt(cm1 * (cm1 + 2.0)));
      if (d < kTiny) return TangentVector{x, project_to_tangent(x, delta)};
      const double c = cm1 + 1.0;
      const Vec w = y.coords - c * x.coords;  // = y + <x,y> x, Minkowski-tangent at x
      const double wn = std::sqrt(std::max(kTiny * kTiny, cm1 * (cm1 + 2.0)));
      return TangentVector{x, (d / wn) * w};
    }
  }
  return std::nullopt;
}

TangentVector Manifold::log_map(const Point& x, const Point& y) const {
  auto v = try_log_map(x, y);
  if (!v) throw BeyondInjectivityRadius(distance(x, y), injectivity_radius(x));
  return *v;
}

Point Manifold::geodesic_point(const Point& x, const Point& y, double s) const {
  if (s == 0.0) return x;
  if (s == 1.0) return y;
  TangentVector v = log_map(x, y);
  v.vec *= s;
  return exp_map(x, v);
}

double Manifold::injectivity_radius(const Point&) const {
  switch (kind_) {
    case ManifoldKind::Sphere: return 3.14159265358979323846 * radius_;
    case ManifoldKind::FlatTorus: return 0.5 * shortest_lattice_;
    default: return tol::kInfiniteRadius;
  }
}

double Manifold::injectivity_radius(const PointSet& set) const {
  // All four models are homogeneous; take the minimum over the set anyway so
  // the contract survives future non-homogeneous extensions.
  double r = tol::kInfiniteRadius;
  if (set.empty()) return injectivity_radius(Point{});
  for (const auto& p : set) r = std::min(r, injectivity_radius(p));
  return r;
}

Point Manifold::project_to_manifold(const Vec& ambient) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return Point{ambient};
    case ManifoldKind::FlatTorus: {
      Vec c = ambient;
      for (int i = 0; i < dim_; ++i) c[i] = wrap_unit(c[i]);
      return Point{c};
    }
    case ManifoldKind::Sphere: {
      const double n = ambient.norm();
      if (n < 0.1 * radius_)
        throw ProjectionIllConditioned("ambient point too close to the sphere centre");
      return Point{(radius_ / n) * ambient};
    }
    case ManifoldKind::Hyperbolic2: {
      const double q = -minkowski_inner(ambient, ambient);
      if (q < 0.01 || ambient[0] <= 0.0)
        throw ProjectionIllConditioned("ambient point too close to the light cone");
      return Point{ambient / std::sqrt(q)};
    }
  }
  return Point{ambient};
}

Vec Manifold::project_to_tangent(const Point& x, const Vec& ambient) const {
  switch (kind_) {
    case ManifoldKind::Sphere:
      return ambient - (x.coords.dot(ambient) / (radius_ * radius_)) * x.coords;
    case ManifoldKind::Hyperbolic2:
      return ambient + minkowski_inner(x.coords, ambient) * x.coords;
    default:
      return ambient;
  }
}

Vec Manifold::projection_derivative(const Vec& pre_projection, const Vec& w) const {
  switch (kind_) {
    case ManifoldKind::Sphere: {
      const double n = pre_projection.norm();
      const Vec unit = pre_projection / n;
      return (radius_ / n) * (w - unit * unit.dot(w));
    }
    case ManifoldKind::Hyperbolic2: {
      const double q = -minkowski_inner(pre_projection, pre_projection);
      const double inv = 1.0 / std::sqrt(q);
      return inv * w + (inv * inv * inv) * minkowski_inner(pre_projection, w) * pre_projection;
    }
    default:
      return w;
  }
}

double Manifold::diameter(const PointSet& set) const {
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      d = std::max(d, distance(set[i], set[j]));
  return d;
}

}  // namespace flowtop
