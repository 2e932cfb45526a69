#pragma once

#include "flowtop/flow.hpp"
#include "flowtop/great_circle.hpp"
#include "flowtop/sphere_map.hpp"

#include <iosfwd>
#include <string>

namespace flowtop {

// Sampled compact set of tangent vectors. Directions are stored unit length;
// the original lengths sit in `scales`, so linearity of the derivative flow
// turns one unit-vector run into the estimate for the scaled vector.
struct CompactTangentSet {
  std::vector<TangentVector> samples;
  std::vector<double> scales;
  std::string description;
};

// Tangent vectors of the discretised map: central differences over adjacent
// vertices for loops, differences along two domain directions through the
// mesh interpolation for icospheres.
CompactTangentSet tangent_set_from_map(const SphereMap& map);

// The differential of s -> map(e(s)) at equally spaced circle samples,
// evaluated once per (map, plane) and reused across realisations. `ds` is
// the arc spacing of the quadrature.
struct CircleTangentFrame {
  std::vector<TangentVector> tangents;
  double ds = 0.0;
};

CircleTangentFrame circle_tangent_frame(const SphereMap& map, const GrassmannPlane& plane,
                                        int samples);

// Length of the flowed composite loop t -> flow(map(e(s))): trapezoid
// quadrature of |T flow applied to the frame tangents|. Loops (n = 1) use
// their own vertices as the quadrature points regardless of the plane, which
// is the identity-parametrisation convention for S^1.
double circle_length_under_flow(const CircleTangentFrame& frame, const FlowRealization& r,
                                double t);
double circle_length_under_flow(const SphereMap& map, const FlowRealization& r, double t,
                                const GrassmannPlane& plane, int samples = 64);

struct DiameterBoundCheck {
  double diam = 0.0;
  double half_sup_length = 0.0;
  bool holds = false;
};

// Per-realisation inequality diam(pushed image) <= half the largest flowed
// circle length over the given circle family, within relative quadrature
// tolerance. For n = 2 the family is augmented by the plane through the two
// domain vertices whose images realise the diameter.
DiameterBoundCheck diameter_bound_check(const SphereMap& map, const FlowRealization& r, double t,
                                        const std::vector<CircleTangentFrame>& frames);
DiameterBoundCheck diameter_bound_check(const SphereMap& map, const FlowRealization& r, double t,
                                        const std::vector<GrassmannPlane>& circles,
                                        int samples = 64);

struct MomentIntegralReport {
  std::vector<double> t_grid;
  std::vector<double> integrand;  // sup over the tangent set of mean |T flow v|
  std::vector<double> stderrs;    // standard error of the sup-achieving sample
  double truncated_integral = 0.0;
  double tail_slope = 0.0;
  bool converged = false;
};

// Monte Carlo moment curve: for each grid time the mean of |T flow v| per
// tangent sample, the supremum over the set, the trapezoid integral over
// [0, t_max], and a log-linear fit of the last quarter that decides the
// convergence flag (negative slope and extrapolated tail below 5% of the
// truncated integral).
MomentIntegralReport moment_integral_estimate(const FieldPtr& spec, const CompactTangentSet& l,
                                              double t_max, double dt, long trials,
                                              uint64_t seed, int threads = 0,
                                              int grid_points = 201);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  long trials = 0;
};

MeanEstimate expected_diameter(const FieldPtr& spec, const SphereMap& map, double t, double dt,
                               long trials, uint64_t seed, int threads = 0);

struct DiameterTrace {
  std::vector<double> times;
  std::vector<double> means;
  std::vector<double> stderrs;
};

// One pass per trial over the increasing grid, recording the image diameter
// at every requested time.
DiameterTrace expected_diameter_trace(const FieldPtr& spec, const SphereMap& map,
                                      const std::vector<double>& t_grid, double dt, long trials,
                                      uint64_t seed, int threads = 0);

// Grid times whose expected diameter clears the threshold with a two
// standard error margin. An empty result is a reported outcome, not an error.
std::vector<double> find_shrinking_times(const FieldPtr& spec, const SphereMap& map,
                                         const std::vector<double>& t_grid, double dt,
                                         long trials, double threshold, uint64_t seed,
                                         int threads = 0);

// Two columns (t, integrand), full precision.
void write_integrand_csv(std::ostream& os, const MomentIntegralReport& report);

}  // namespace flowtop
