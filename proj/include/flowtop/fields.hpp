#pragma once

#include "flowtop/manifold.hpp"

#include <memory>
#include <string>

namespace flowtop {

// Driving data of a Stratonovich equation dx = X(x) o dB + A(x) dt: a drift
// field A and m diffusion columns X_e, all expressed in ambient coordinates.
// Fields must evaluate smoothly in a neighbourhood of the manifold (difference
// quotients and predictor states step slightly off it) and must be tangent on
// it to within tol::kFieldTangency.
//
// drift_derivative / diffusion_derivative return the directional derivative of
// the field at x along v. Built-in specs override them with the analytic
// Jacobian applied to v; the default is a central difference of the field.
class VectorField {
 public:
  VectorField(Manifold manifold, int noise_dim, std::string name)
      : manifold_(std::move(manifold)), noise_dim_(noise_dim), name_(std::move(name)) {}
  virtual ~VectorField() = default;

  virtual Vec drift(const Vec& x) const = 0;
  virtual Vec diffusion(int noise_index, const Vec& x) const = 0;
  virtual Vec drift_derivative(const Vec& x, const Vec& v) const;
  virtual Vec diffusion_derivative(int noise_index, const Vec& x, const Vec& v) const;

  const Manifold& manifold() const { return manifold_; }
  int noise_dim() const { return noise_dim_; }
  const std::string& name() const { return name_; }

 protected:
  Vec central_difference(bool is_drift, int noise_index, const Vec& x, const Vec& v) const;

 private:
  Manifold manifold_;
  int noise_dim_;
  std::string name_;
};

using FieldPtr = std::shared_ptr<const VectorField>;

// dx = -lambda x dt + sigma_add dB on R^d (m = d, additive noise).
FieldPtr make_linear_contraction(const Manifold& euclidean, double lambda, double sigma_add);

// dx = -lambda x dt + sigma_mul x o dB on R^1; closed-form solution
// x exp(-lambda t + sigma_mul B_t).
FieldPtr make_geometric_multiplicative(double lambda, double sigma_mul);

// dx = sigma dB in lattice coordinates on a flat torus (m = dim); the flow is
// the rigid translation by sigma B_t.
FieldPtr make_torus_translation(const Manifold& torus, double sigma);

// Diffusion columns are the tangential projections of the ambient axes of
// R^3 restricted to S^2; drift free.
FieldPtr make_sphere_gradient_frame(const Manifold& sphere2);

// Drift pulls toward `base` at rate lambda times distance; diffusion columns
// are sigma times the tangential projections of the ambient axes.
FieldPtr make_hyperbolic_contraction(const Manifold& hyperbolic, double lambda, double sigma,
                                     Point base);

// Identically zero drift and diffusion; the frozen flow.
FieldPtr make_zero_field(const Manifold& m);

}  // namespace flowtop
