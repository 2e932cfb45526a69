#include "flowtop/manifold.hpp"
#include "flowtop/region.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"

using namespace flowtop;
using testutil::pt;
using testutil::random_point;
using testutil::random_tangent;
using testutil::vec_of;

namespace {

const double kPi = 3.14159265358979323846;

// Caps |v| so exp stays inside the unique-geodesic range of each model.
double tangent_cap(const Manifold& m, const Point& x) {
  const double r = m.injectivity_radius(x);
  if (r >= tol::kInfiniteRadius) return 3.0;
  return 0.9 * r;
}

std::vector<Manifold> all_models() {
  Mat skew(2, 2);
  skew << 1.0, 0.3, 0.0, 0.7;
  return {Manifold::euclidean(1),        Manifold::euclidean(3),
          Manifold::sphere(2),           Manifold::sphere(2, 2.5),
          Manifold::flat_torus(1),       Manifold::flat_torus(3),
          Manifold::flat_torus(skew),    Manifold::hyperbolic2()};
}

}  // namespace

TEST_CASE("euclidean log, distance, geodesic point") {
  const auto m = Manifold::euclidean(2);
  const auto v = m.log_map(pt({0.0, 0.0}), pt({3.0, 4.0}));
  CHECK(v.vec[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(v.vec[1] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(m.distance(pt({0.0, 0.0}), pt({3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-15));

  const auto q = m.geodesic_point(pt({0.0, 0.0}), pt({2.0, 0.0}), 0.25);
  CHECK(q.coords[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q.coords[1] == doctest::Approx(0.0).epsilon(1e-15));

  const Vec w = m.project_to_tangent(pt({1.0, 1.0}), vec_of({0.3, -0.8}));
  CHECK((w - vec_of({0.3, -0.8})).norm() == 0.0);
}

TEST_CASE("sphere distance, midpoint, projections") {
  const auto s = Manifold::sphere(2);
  CHECK(s.distance(pt({1, 0, 0}), pt({0, 1, 0})) == doctest::Approx(kPi / 2).epsilon(1e-12));

  const auto mid = s.geodesic_point(pt({1, 0, 0}), pt({0, 1, 0}), 0.5);
  const double h = std::sqrt(0.5);
  CHECK(mid.coords[0] == doctest::Approx(h).epsilon(1e-12));
  CHECK(mid.coords[1] == doctest::Approx(h).epsilon(1e-12));
  CHECK(s.distance(pt({1, 0, 0}), mid) == doctest::Approx(kPi / 4).epsilon(1e-10));
  CHECK(s.distance(mid, pt({0, 1, 0})) == doctest::Approx(kPi / 4).epsilon(1e-10));

  const auto p = s.project_to_manifold(vec_of({2.0, 0.0, 0.0}));
  CHECK((p.coords - vec_of({1.0, 0.0, 0.0})).norm() <= 1e-15);
  CHECK_THROWS_AS((void)s.project_to_manifold(vec_of({0.0, 0.0, 0.0})), ProjectionIllConditioned);

  const Vec tv = s.project_to_tangent(pt({1, 0, 0}), vec_of({1.0, 2.0, 0.0}));
  CHECK(tv[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(tv[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("flat torus wrap-aware log, distance, projection") {
  const auto t1 = Manifold::flat_torus(1);
  const auto v = t1.log_map(pt({0.1}), pt({0.9}));
  CHECK(v.vec[0] == doctest::Approx(-0.2).epsilon(1e-12));

  const auto t2 = Manifold::flat_torus(2);
  CHECK(t2.distance(pt({0.0, 0.0}), pt({0.5, 0.5})) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));

  const auto p = t2.project_to_manifold(vec_of({1.25, -0.5}));
  CHECK(p.coords[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p.coords[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hyperboloid geodesic and minkowski tangent projection") {
  const auto h = Manifold::hyperbolic2();
  const Point base = pt({1.0, 0.0, 0.0});
  const TangentVector v{base, vec_of({0.0, 1.0, 0.0})};
  CHECK(h.norm(v.vec) == doctest::Approx(1.0).epsilon(1e-14));
  const auto y = h.exp_map(base, v);
  CHECK(y.coords[0] == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
  CHECK(y.coords[1] == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
  CHECK(y.coords[2] == doctest::Approx(0.0).epsilon(1e-12));

  const Vec tv = h.project_to_tangent(base, vec_of({1.0, 1.0, 0.0}));
  CHECK(tv[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(tv[1] == doctest::Approx(1.0).epsilon(1e-14));
  // Minkowski orthogonality to the base point.
  CHECK(std::abs(-tv[0] * base.coords[0] + tv[1] * base.coords[1] + tv[2] * base.coords[2]) <=
        1e-14);
}

TEST_CASE("injectivity radius per model") {
  CHECK(Manifold::sphere(2).injectivity_radius(pt({1, 0, 0})) ==
        doctest::Approx(kPi).epsilon(1e-12));
  CHECK(Manifold::flat_torus(2).injectivity_radius(pt({0.3, 0.3})) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(Manifold::euclidean(3).injectivity_radius(pt({0, 0, 0})) >= tol::kInfiniteRadius);

  const PointSet k = {pt({0.1, 0.2}), pt({0.8, 0.9})};
  CHECK(Manifold::flat_torus(2).injectivity_radius(k) == doctest::Approx(0.5).epsilon(1e-12));
  const PointSet ke = {pt({0.0, 0.0}), pt({5.0, 5.0})};
  CHECK(Manifold::euclidean(2).injectivity_radius(ke) >= tol::kInfiniteRadius);
}

TEST_CASE("diameter of point sets") {
  const auto e1 = Manifold::euclidean(1);
  CHECK(e1.diameter({pt({4.2})}) == 0.0);
  CHECK(e1.diameter({pt({0.0}), pt({1.0}), pt({3.0})}) == doctest::Approx(3.0).epsilon(1e-15));
  const auto t1 = Manifold::flat_torus(1);
  CHECK(t1.diameter({pt({0.0}), pt({0.4}), pt({0.8})}) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("exp/log round trip across models") {
  for (const auto& m : all_models()) {
    for (long i = 0; i < 250; ++i) {
      const Point x = random_point(m, 11, i);
      const double len = (0.05 + 0.9 * testutil::uniform01(12, i, 0, 0)) * tangent_cap(m, x);
      const auto v = random_tangent(m, x, len, 13, i);
      const Point y = m.exp_map(x, v);
      CHECK(m.constraint_residual(y) <= tol::kConstraint);
      const auto back = m.log_map(x, y);
      CHECK((back.vec - v.vec).norm() <= tol::kRoundTrip * (1.0 + len));
      CHECK(std::abs(m.distance(x, y) - len) <= 1e-7 * (1.0 + len));
    }
  }
}

TEST_CASE("distance symmetry and triangle inequality") {
  for (const auto& m : all_models()) {
    for (long i = 0; i < 250; ++i) {
      const Point x = random_point(m, 21, i);
      const Point y = random_point(m, 22, i);
      const Point z = random_point(m, 23, i);
      const double dxy = m.distance(x, y);
      CHECK(std::abs(dxy - m.distance(y, x)) <= 1e-9);
      CHECK(m.distance(x, z) <= dxy + m.distance(y, z) + 1e-9);
      CHECK(m.distance(x, x) <= 1e-12);
    }
  }
}

TEST_CASE("geodesic arc-length parametrization") {
  for (const auto& m : all_models()) {
    for (long i = 0; i < 120; ++i) {
      const Point x = random_point(m, 31, i);
      const auto v = random_tangent(m, x, 0.8 * tangent_cap(m, x), 32, i);
      const Point y = m.exp_map(x, v);
      const double d = m.distance(x, y);
      const double s = testutil::uniform01(33, i, 0, 0);
      const double sp = testutil::uniform01(33, i, 0, 1);
      const Point gs = m.geodesic_point(x, y, s);
      const Point gsp = m.geodesic_point(x, y, sp);
      CHECK(m.constraint_residual(gs) <= tol::kConstraint);
      CHECK(std::abs(m.distance(gs, gsp) - std::abs(s - sp) * d) <= 1e-7 * (1.0 + d));
    }
  }
}

TEST_CASE("try_log_map refuses beyond-radius pairs") {
  const auto s = Manifold::sphere(2);
  CHECK(!s.try_log_map(pt({1, 0, 0}), pt({-1, 0, 0})).has_value());
  CHECK_THROWS_AS((void)s.log_map(pt({1, 0, 0}), pt({-1, 0, 0})), BeyondInjectivityRadius);
  const auto t = Manifold::flat_torus(1);
  CHECK(!t.try_log_map(pt({0.0}), pt({0.5})).has_value());
  CHECK(t.try_log_map(pt({0.0}), pt({0.49})).has_value());
}

TEST_CASE("region sampling stays inside and spans the boundary") {
  const auto m = Manifold::euclidean(2);
  Region k;
  k.balls.push_back({pt({1.0, -2.0}), 0.75});
  const PointSet samples = sample_region(m, k, 8);
  CHECK(samples.size() == 9);
  bool boundary_seen = false;
  for (const auto& p : samples) {
    const double d = m.distance(k.balls[0].center, p);
    CHECK(d <= 0.75 + 1e-12);
    if (d >= 0.75 - 1e-9) boundary_seen = true;
  }
  CHECK(boundary_seen);
  CHECK(k.contains(m, pt({1.0, -1.3})));
  CHECK(!k.contains(m, pt({1.0, -0.9})));
}

TEST_CASE("tangent basis is orthonormal") {
  for (const auto& m : all_models()) {
    const Point x = random_point(m, 41, 7);
    const Mat basis = tangent_basis(m, x);
    CHECK(basis.cols() == m.dim());
    for (int a = 0; a < basis.cols(); ++a) {
      CHECK(m.tangent_residual(x, basis.col(a)) <= tol::kConstraint);
      for (int b = 0; b <= a; ++b) {
        const double want = a == b ? 1.0 : 0.0;
        CHECK(std::abs(m.inner(basis.col(a), basis.col(b)) - want) <= 1e-10);
      }
    }
  }
}
