#pragma once

#include "flowtop/sphere_map.hpp"

#include <iosfwd>
#include <optional>

namespace flowtop {

// Discrete homotopy grid between two maps with the same domain: vertex i at
// stage j holds gamma_i(j / s_steps), with stage 0 and stage s_steps equal to
// the endpoint maps bit for bit.
struct Homotopy {
  int vertices = 0;
  int s_steps = 0;
  double time = 0.0;  // flow time of the segment end, when built by a chain
  PointSet grid;      // row-major: index(i, j) = i * (s_steps + 1) + j

  const Point& at(int vertex, int stage) const {
    return grid[std::size_t(vertex) * std::size_t(s_steps + 1) + std::size_t(stage)];
  }
};

enum class HomotopyFailureKind { BeyondInjectivityRadius, ContinuityBroken };

struct HomotopyFailure {
  HomotopyFailureKind kind = HomotopyFailureKind::BeyondInjectivityRadius;
  int vertex = -1;
  double distance = 0.0;
  double radius = 0.0;
};

// Either a homotopy or the reason none exists at this resolution. Failures
// are expected data for the downstream statistics, not errors.
struct HomotopyResult {
  std::optional<Homotopy> homotopy;
  std::optional<HomotopyFailure> failure;
  bool ok() const { return homotopy.has_value(); }
};

struct ChainBreak {
  int segment = -1;  // index of the time step whose homotopy failed
  HomotopyFailure failure;
};

struct ChainResult {
  std::vector<Homotopy> segments;
  std::vector<double> times;  // segment end times, including the final t
  std::optional<ChainBreak> broken;
  bool ok() const { return !broken.has_value(); }
};

struct BallWitness {
  Point center;
  double radius = 0.0;
};

// Vertexwise geodesic interpolation from start to end. Fails with the first
// vertex whose displacement reaches the injectivity bound, or whose
// interpolated rows lose discrete continuity (adjacent grid points further
// than 0.9 * r_inj apart).
HomotopyResult geodesic_homotopy(const SphereMap& start, const SphereMap& end, int s_steps);

// Pushes the map along the realisation over the ladder 0, delta, 2*delta,
// ..., t and connects consecutive stages by geodesic homotopies. Stops at the
// first broken segment and reports it.
ChainResult stepwise_homotopy_chain(const SphereMap& map, const FlowRealization& r, double t,
                                    double delta, int s_steps);

// A ball certifying the image is contractible in place: returned when the
// image diameter is below half the injectivity radius over K. The centre is
// the vertex minimising the maximal distance to the others, so radius <=
// diameter < r_inj(K) / 2.
std::optional<BallWitness> null_homotopy_witness(const SphereMap& pushed, const PointSet& k);

// Integer homology class of a torus loop: the sum of minimal edge lifts.
// Throws ResolutionTooCoarse when an edge reaches the injectivity radius and
// the lift becomes ambiguous.
std::vector<long> winding_number(const SphereMap& torus_loop);

// CSV rows: trial, step (chain segment), vertex, s_index, ambient coordinates.
void write_homotopy_csv(std::ostream& os, const std::vector<ChainResult>& chains);

}  // namespace flowtop
