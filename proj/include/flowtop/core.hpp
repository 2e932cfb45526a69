#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace flowtop {

// Every model space used here embeds in R^k with small k, so points and
// tangent vectors use fixed-capacity storage and the integrators never touch
// the heap in their inner loops.
inline constexpr int kMaxAmbientDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxAmbientDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxAmbientDim, kMaxAmbientDim>;

namespace tol {

// Numeric contracts shared by the library and the test suite.
inline constexpr double kConstraint = 1e-8;      // point/tangent invariant residual
inline constexpr double kFieldTangency = 1e-9;   // vector fields must be tangent to this
inline constexpr double kRoundTrip = 1e-7;       // exp/log round trip, scaled by (1 + |v|)
inline constexpr double kInfiniteRadius = 1e12;  // sentinel for unbounded injectivity radius
inline constexpr double kGridSnap = 1e-9;        // relative slack when snapping to the time grid

}  // namespace tol

struct Point {
  Vec coords;
};

struct TangentVector {
  Point base;
  Vec vec;
};

using PointSet = std::vector<Point>;

struct FlowtopError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when d(x, y) >= R_inj(x): there is no unique minimizing geodesic and
// log-based constructions have to stop rather than guess a branch.
struct BeyondInjectivityRadius : FlowtopError {
  BeyondInjectivityRadius(double distance_, double radius_);
  double distance;
  double radius;
};

struct ProjectionIllConditioned : FlowtopError {
  using FlowtopError::FlowtopError;
};

struct HorizonExceeded : FlowtopError {
  using FlowtopError::FlowtopError;
};

struct ResolutionTooCoarse : FlowtopError {
  using FlowtopError::FlowtopError;
};

struct ConfigInvalid : FlowtopError {
  using FlowtopError::FlowtopError;
};

// The shrinking-time and stationarity requirements have an empty
// intersection: a legitimate negative outcome of the pipeline, reported as
// its own exit code by the command line driver.
struct NoValidTime : FlowtopError {
  using FlowtopError::FlowtopError;
};

}  // namespace flowtop
