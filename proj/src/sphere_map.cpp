#include "flowtop/sphere_map.hpp"

#include "flowtop/region.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>

namespace flowtop {

namespace {

constexpr double kPi = 3.14159265358979323846;

void enforce_resolution(const SphereMap& map) {
  const double r_inj = map.manifold.injectivity_radius(map.image);
  const double edge = max_edge_length(map);
  if (edge > 0.5 * r_inj)
    throw ConfigInvalid("map resolution too coarse: largest image edge " +
                        std::to_string(edge) + " exceeds half the injectivity radius");
}

}  // namespace

IcosphereMesh icosphere(int level) {
  if (level < 0 || level > 6) throw ConfigInvalid("icosphere level out of range");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  IcosphereMesh mesh;
  const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                             {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                             {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& v : raw) {
    Vec p(3);
    p << v[0], v[1], v[2];
    mesh.vertices.push_back(p / p.norm());
  }
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec p = mesh.vertices[a] + mesh.vertices[b];
      p /= p.norm();
      mesh.vertices.push_back(p);
      const int idx = int(mesh.vertices.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(next);
  }
  return mesh;
}

SphereMap make_geodesic_circle_loop(const Manifold& m, const Point& center, double rho,
                                    int vertices) {
  if (vertices < 3) throw ConfigInvalid("circle loop needs at least 3 vertices");
  if (!(rho > 0.0) || rho >= m.injectivity_radius(center))
    throw ConfigInvalid("circle loop radius must lie inside the injectivity radius");
  if (m.constraint_residual(center) > tol::kConstraint)
    throw ConfigInvalid("circle loop centre violates the manifold constraint");
  const Mat basis = tangent_basis(m, center);
  if (basis.cols() < 2)
    throw ConfigInvalid("circle loop needs a manifold of dimension at least 2");
  SphereMap map;
  map.n = 1;
  map.manifold = m;
  map.domain.reserve(vertices);
  map.image.reserve(vertices);
  for (int k = 0; k < vertices; ++k) {
    const double a = 2.0 * kPi * double(k) / double(vertices);
    Vec u(2);
    u << std::cos(a), std::sin(a);
    map.domain.push_back(u);
    TangentVector v{center, basis.col(0) * (rho * u[0]) + basis.col(1) * (rho * u[1])};
    map.image.push_back(m.exp_map(center, v));
  }
  enforce_resolution(map);
  return map;
}

SphereMap make_torus_winding_loop(const Manifold& torus, const std::vector<long>& winding,
                                  int vertices, const Point& offset) {
  if (torus.kind() != ManifoldKind::FlatTorus)
    throw ConfigInvalid("winding loop requires a flat torus");
  if (int(winding.size()) != torus.dim())
    throw ConfigInvalid("winding vector length must match the torus dimension");
  if (vertices < 3) throw ConfigInvalid("winding loop needs at least 3 vertices");
  SphereMap map;
  map.n = 1;
  map.manifold = torus;
  for (int k = 0; k < vertices; ++k) {
    const double a = 2.0 * kPi * double(k) / double(vertices);
    Vec u(2);
    u << std::cos(a), std::sin(a);
    map.domain.push_back(u);
    Vec c(torus.dim());
    for (int i = 0; i < torus.dim(); ++i)
      c[i] = offset.coords.size() > i ? offset.coords[i] : 0.0;
    for (int i = 0; i < torus.dim(); ++i)
      c[i] += double(winding[i]) * double(k) / double(vertices);
    map.image.push_back(torus.project_to_manifold(c));
  }
  enforce_resolution(map);
  return map;
}

SphereMap make_icosphere_map(const Manifold& euclidean3, const Point& center, double rho,
                             int level) {
  if (euclidean3.kind() != ManifoldKind::Euclidean || euclidean3.ambient_dim() != 3)
    throw ConfigInvalid("icosphere map fixture requires R^3");
  if (!(rho > 0.0)) throw ConfigInvalid("icosphere map radius must be positive");
  const IcosphereMesh mesh = icosphere(level);
  SphereMap map;
  map.n = 2;
  map.manifold = euclidean3;
  map.domain = mesh.vertices;
  map.faces = mesh.faces;
  map.image.reserve(mesh.vertices.size());
  for (const auto& u : mesh.vertices) map.image.push_back(Point{center.coords + rho * u});
  enforce_resolution(map);
  return map;
}

SphereMap make_icosphere_identity(const Manifold& sphere2, int level) {
  if (sphere2.kind() != ManifoldKind::Sphere || sphere2.dim() != 2)
    throw ConfigInvalid("identity icosphere requires S^2");
  const IcosphereMesh mesh = icosphere(level);
  SphereMap map;
  map.n = 2;
  map.manifold = sphere2;
  map.domain = mesh.vertices;
  map.faces = mesh.faces;
  map.image.reserve(mesh.vertices.size());
  for (const auto& u : mesh.vertices)
    map.image.push_back(Point{sphere2.radius() * u});
  enforce_resolution(map);
  return map;
}

double max_edge_length(const SphereMap& map) {
  double edge = 0.0;
  if (map.n == 1) {
    const int v = map.vertex_count();
    for (int k = 0; k < v; ++k)
      edge = std::max(edge, map.manifold.distance(map.image[k], map.image[(k + 1) % v]));
  } else {
    for (const auto& f : map.faces)
      for (int i = 0; i < 3; ++i)
        edge = std::max(edge,
                        map.manifold.distance(map.image[f[i]], map.image[f[(i + 1) % 3]]));
  }
  return edge;
}

Point interpolate_map(const SphereMap& map, const Vec& domain_unit) {
  if (map.n == 1) {
    // Angle along the loop, blended between the two enclosing vertices.
    const double angle = std::atan2(domain_unit[1], domain_unit[0]);
    const int v = map.vertex_count();
    double pos = angle / (2.0 * kPi) * double(v);
    pos -= std::floor(pos / double(v)) * double(v);
    const int k = int(pos) % v;
    const double s = pos - std::floor(pos);
    return map.manifold.geodesic_point(map.image[k], map.image[(k + 1) % v], s);
  }

  // Locate the triangle whose cone contains the direction: the face with the
  // least-negative barycentric solve of u = [a b c] w.
  double best_min = -1e30;
  double best_w[3] = {0, 0, 0};
  int best_face = -1;
  Eigen::Matrix3d mat;
  const Eigen::Vector3d rhs(domain_unit[0], domain_unit[1], domain_unit[2]);
  for (std::size_t fi = 0; fi < map.faces.size(); ++fi) {
    const auto& f = map.faces[fi];
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < 3; ++r) mat(r, c) = map.domain[f[c]][r];
    const Eigen::Vector3d w = mat.partialPivLu().solve(rhs);
    const double mn = w.minCoeff();
    if (mn > best_min) {
      best_min = mn;
      best_face = int(fi);
      best_w[0] = w[0];
      best_w[1] = w[1];
      best_w[2] = w[2];
    }
    if (mn >= 0.0) break;  // strictly inside, no better candidate exists
  }
  const auto& f = map.faces[best_face];
  const double sum = best_w[0] + best_w[1] + best_w[2];
  Vec blend = Vec::Zero(map.manifold.ambient_dim());
  for (int c = 0; c < 3; ++c) blend += (best_w[c] / sum) * map.image[f[c]].coords;
  return map.manifold.project_to_manifold(blend);
}

SphereMap push_map(const SphereMap& map, const FlowRealization& r, double t) {
  SphereMap out = map;
  for (auto& p : out.image) p = flow_map(r, p, t).point;
  return out;
}

}  // namespace flowtop
