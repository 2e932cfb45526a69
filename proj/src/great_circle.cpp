#include "flowtop/great_circle.hpp"

#include <cmath>

namespace flowtop {

namespace {

constexpr double kPi = 3.14159265358979323846;

double radical_inverse(long index, int base) {
  double inv = 1.0 / double(base);
  double factor = inv;
  double value = 0.0;
  while (index > 0) {
    value += double(index % base) * factor;
    index /= base;
    factor *= inv;
  }
  return value;
}

// Approximately Gaussian vector from 2*dim Halton components through
// Box-Muller; deterministic in the sequence index.
Vec halton_gaussian(long index, int dim, int base_offset) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                               23, 29, 31, 37, 41, 43, 47, 53};
  Vec out(dim);
  for (int j = 0; j < dim; j += 2) {
    const double u1 = radical_inverse(index, primes[base_offset + j]);
    const double u2 = radical_inverse(index, primes[base_offset + j + 1]);
    const double rad = std::sqrt(-2.0 * std::log(1.0 - u1));
    out[j] = rad * std::cos(2.0 * kPi * u2);
    if (j + 1 < dim) out[j + 1] = rad * std::sin(2.0 * kPi * u2);
  }
  return out;
}

}  // namespace

std::vector<GreatCircleSample> great_circle(const GrassmannPlane& plane, int samples) {
  if (samples < 3) throw ConfigInvalid("great circle needs at least three samples");
  if (std::abs(plane.b1.norm() - 1.0) > 1e-12 || std::abs(plane.b2.norm() - 1.0) > 1e-12 ||
      std::abs(plane.b1.dot(plane.b2)) > 1e-12)
    throw ConfigInvalid("plane basis is not orthonormal");

  std::vector<GreatCircleSample> out;
  out.reserve(std::size_t(samples));
  for (int k = 0; k < samples; ++k) {
    const double s = 2.0 * kPi * double(k) / double(samples);
    const double c = std::cos(s);
    const double d = std::sin(s);
    out.push_back({c * plane.b1 + d * plane.b2, -d * plane.b1 + c * plane.b2});
  }
  return out;
}

GrassmannPlane identity_circle_plane() {
  GrassmannPlane plane;
  plane.b1 = Vec::Zero(2);
  plane.b2 = Vec::Zero(2);
  plane.b1[0] = 1.0;
  plane.b2[1] = 1.0;
  return plane;
}

GrassmannPlane plane_through(const Vec& a, const Vec& b) {
  GrassmannPlane plane;
  const double an = a.norm();
  if (an < 1e-12) throw ConfigInvalid("plane axis has zero length");
  plane.b1 = a / an;
  Vec w = b - b.dot(plane.b1) * plane.b1;
  const double wn = w.norm();
  if (wn < 1e-9 * b.norm())
    throw ConfigInvalid("points are parallel, the plane through them is not unique");
  plane.b2 = w / wn;
  return plane;
}

std::vector<GrassmannPlane> low_discrepancy_planes(int dim, int count) {
  if (dim < 2) throw ConfigInvalid("planes need ambient dimension at least 2");
  if (dim > 8) throw ConfigInvalid("plane sampler supports ambient dimension up to 8");
  if (count < 1) throw ConfigInvalid("plane count must be positive");

  // Disjoint prime bases for the two directions (pair-aligned offset).
  const int offset = dim + (dim & 1);
  std::vector<GrassmannPlane> planes;
  planes.reserve(std::size_t(count));
  long index = 1;
  while (int(planes.size()) < count) {
    const Vec g1 = halton_gaussian(index, dim, 0);
    const Vec g2 = halton_gaussian(index, dim, offset);
    ++index;
    const double n1 = g1.norm();
    if (n1 < 1e-9) continue;
    GrassmannPlane plane;
    plane.b1 = g1 / n1;
    Vec w = g2 - g2.dot(plane.b1) * plane.b1;
    const double wn = w.norm();
    if (wn < 1e-9) continue;
    plane.b2 = w / wn;
    planes.push_back(std::move(plane));
  }
  return planes;
}

}  // namespace flowtop
