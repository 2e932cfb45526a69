#include "flowtop/fields.hpp"

#include <cmath>

namespace flowtop {

Vec VectorField::central_difference(bool is_drift, int noise_index, const Vec& x,
                                    const Vec& v) const {
  const double vn = v.norm();
  if (vn == 0.0) return Vec::Zero(x.size());
  const double h = 1e-6 * manifold_.scale();
  const Vec dir = v / vn;
  const Vec hi = is_drift ? drift(x + h * dir) : diffusion(noise_index, x + h * dir);
  const Vec lo = is_drift ? drift(x - h * dir) : diffusion(noise_index, x - h * dir);
  return (vn / (2.0 * h)) * (hi - lo);
}

Vec VectorField::drift_derivative(const Vec& x, const Vec& v) const {
  return central_difference(true, 0, x, v);
}

Vec VectorField::diffusion_derivative(int noise_index, const Vec& x, const Vec& v) const {
  return central_difference(false, noise_index, x, v);
}

namespace {

class LinearContraction final : public VectorField {
 public:
  LinearContraction(const Manifold& m, double lambda, double sigma)
      : VectorField(m, m.ambient_dim(), "linear_contraction"),
        lambda_(lambda),
        sigma_(sigma) {}

  Vec drift(const Vec& x) const override { return -lambda_ * x; }
  Vec diffusion(int e, const Vec& x) const override {
    Vec c = Vec::Zero(x.size());
    c[e] = sigma_;
    return c;
  }
  Vec drift_derivative(const Vec&, const Vec& v) const override { return -lambda_ * v; }
  Vec diffusion_derivative(int, const Vec& x, const Vec&) const override {
    return Vec::Zero(x.size());
  }

 private:
  double lambda_, sigma_;
};

class GeometricMultiplicative final : public VectorField {
 public:
  GeometricMultiplicative(double lambda, double sigma)
      : VectorField(Manifold::euclidean(1), 1, "geometric_multiplicative"),
        lambda_(lambda),
        sigma_(sigma) {}

  Vec drift(const Vec& x) const override { return -lambda_ * x; }
  Vec diffusion(int, const Vec& x) const override { return sigma_ * x; }
  Vec drift_derivative(const Vec&, const Vec& v) const override { return -lambda_ * v; }
  Vec diffusion_derivative(int, const Vec&, const Vec& v) const override {
    return sigma_ * v;
  }

 private:
  double lambda_, sigma_;
};

class TorusTranslation final : public VectorField {
 public:
  TorusTranslation(const Manifold& m, double sigma)
      : VectorField(m, m.dim(), "torus_translation"), sigma_(sigma) {}

  Vec drift(const Vec& x) const override { return Vec::Zero(x.size()); }
  Vec diffusion(int e, const Vec& x) const override {
    Vec c = Vec::Zero(x.size());
    c[e] = sigma_;
    return c;
  }
  Vec drift_derivative(const Vec& x, const Vec&) const override {
    return Vec::Zero(x.size());
  }
  Vec diffusion_derivative(int, const Vec& x, const Vec&) const override {
    return Vec::Zero(x.size());
  }

 private:
  double sigma_;
};

class SphereGradientFrame final : public VectorField {
 public:
  explicit SphereGradientFrame(Manifold m)
      : VectorField(std::move(m), 3, "sphere_gradient_frame"),
        r2_(manifold().radius() * manifold().radius()) {}

  Vec drift(const Vec& x) const override { return Vec::Zero(x.size()); }
  Vec diffusion(int e, const Vec& x) const override {
    Vec c = Vec::Zero(x.size());
    c[e] = 1.0;
    return c - (x[e] / r2_) * x;
  }
  Vec drift_derivative(const Vec& x, const Vec&) const override {
    return Vec::Zero(x.size());
  }
  Vec diffusion_derivative(int e, const Vec& x, const Vec& v) const override {
    return -(v[e] / r2_) * x - (x[e] / r2_) * v;
  }

 private:
  double r2_;
};

class HyperbolicContraction final : public VectorField {
 public:
  HyperbolicContraction(Manifold m, double lambda, double sigma, Point base)
      : VectorField(std::move(m), 3, "hyperbolic_contraction"),
        lambda_(lambda),
        sigma_(sigma),
        base_(std::move(base)) {}

  Vec drift(const Vec& x) const override {
    // Evaluate through the nearest on-manifold point so difference quotients
    // taken slightly off the sheet stay smooth.
    const Point p = manifold().project_to_manifold(x);
    if (manifold().distance(p, base_) < 1e-14) return Vec::Zero(x.size());
    return lambda_ * manifold().log_map(p, base_).vec;
  }
  Vec diffusion(int e, const Vec& x) const override {
    const Point p = manifold().project_to_manifold(x);
    Vec c = Vec::Zero(x.size());
    c[e] = 1.0;
    return sigma_ * manifold().project_to_tangent(p, c);
  }

 private:
  double lambda_, sigma_;
  Point base_;
};

class ZeroField final : public VectorField {
 public:
  explicit ZeroField(Manifold m) : VectorField(std::move(m), 1, "zero") {}
  Vec drift(const Vec& x) const override { return Vec::Zero(x.size()); }
  Vec diffusion(int, const Vec& x) const override { return Vec::Zero(x.size()); }
  Vec drift_derivative(const Vec& x, const Vec&) const override {
    return Vec::Zero(x.size());
  }
  Vec diffusion_derivative(int, const Vec& x, const Vec&) const override {
    return Vec::Zero(x.size());
  }
};

}  // namespace

FieldPtr make_linear_contraction(const Manifold& euclidean, double lambda, double sigma_add) {
  if (euclidean.kind() != ManifoldKind::Euclidean)
    throw ConfigInvalid("linear_contraction requires a euclidean manifold");
  return std::make_shared<LinearContraction>(euclidean, lambda, sigma_add);
}

FieldPtr make_geometric_multiplicative(double lambda, double sigma_mul) {
  return std::make_shared<GeometricMultiplicative>(lambda, sigma_mul);
}

FieldPtr make_torus_translation(const Manifold& torus, double sigma) {
  if (torus.kind() != ManifoldKind::FlatTorus)
    throw ConfigInvalid("torus_translation requires a flat torus");
  return std::make_shared<TorusTranslation>(torus, sigma);
}

FieldPtr make_sphere_gradient_frame(const Manifold& sphere2) {
  if (sphere2.kind() != ManifoldKind::Sphere || sphere2.dim() != 2)
    throw ConfigInvalid("sphere_gradient_frame requires S^2");
  return std::make_shared<SphereGradientFrame>(sphere2);
}

FieldPtr make_hyperbolic_contraction(const Manifold& hyperbolic, double lambda, double sigma,
                                     Point base) {
  if (hyperbolic.kind() != ManifoldKind::Hyperbolic2)
    throw ConfigInvalid("hyperbolic_contraction requires the hyperboloid model");
  if (hyperbolic.constraint_residual(base) > tol::kConstraint)
    throw ConfigInvalid("hyperbolic_contraction base point violates the sheet constraint");
  return std::make_shared<HyperbolicContraction>(hyperbolic, lambda, sigma, std::move(base));
}

FieldPtr make_zero_field(const Manifold& m) { return std::make_shared<ZeroField>(m); }

}  // namespace flowtop
