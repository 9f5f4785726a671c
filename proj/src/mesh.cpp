#include "beamkit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <fmt/format.h>

namespace beamkit {

TriMesh::TriMesh(std::vector<Point3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  if (triangles_.size() < 4) throw MeshError("a closed mesh needs at least 4 triangles");
  const int nv = static_cast<int>(vertices_.size());
  for (const Point3& p : vertices_) {
    if (!p.allFinite()) throw MeshError("mesh vertex is not finite");
  }

  std::map<std::pair<int, int>, int> directed;
  normals_.reserve(triangles_.size());
  centroids_.reserve(triangles_.size());
  areas_.reserve(triangles_.size());
  edges_.reserve(triangles_.size());
  double six_volume = 0.0;
  Point3 moment = Point3::Zero();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const Triangle& tri = triangles_[t];
    for (int i : tri) {
      if (i < 0 || i >= nv) throw MeshError(fmt::format("triangle {} references missing vertex {}", t, i));
    }
    const Point3& a = vertices_[static_cast<std::size_t>(tri[0])];
    const Point3& b = vertices_[static_cast<std::size_t>(tri[1])];
    const Point3& c = vertices_[static_cast<std::size_t>(tri[2])];
    const Point3 cross = (b - a).cross(c - a);
    const double twice_area = cross.norm();
    const double longest = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    if (!(twice_area > 1e-14 * longest * longest)) throw MeshError(fmt::format("triangle {} is degenerate", t));
    normals_.push_back(cross / twice_area);
    centroids_.push_back((a + b + c) / 3.0);
    areas_.push_back(0.5 * twice_area);
    edges_.push_back(longest);
    max_edge_ = std::max(max_edge_, longest);

    const double tet = a.dot(b.cross(c));
    six_volume += tet;
    moment += tet * (a + b + c) / 4.0;

    for (int e = 0; e < 3; ++e) {
      const auto key = std::make_pair(tri[static_cast<std::size_t>(e)], tri[static_cast<std::size_t>((e + 1) % 3)]);
      if (++directed[key] > 1) {
        throw MeshError(fmt::format("edge ({}, {}) is shared by triangles with inconsistent orientation",
                                    key.first + 1, key.second + 1));
      }
    }
  }
  for (const auto& [edge, count] : directed) {
    if (!directed.contains({edge.second, edge.first})) {
      throw MeshError(fmt::format("edge ({}, {}) is a boundary edge; the surface is not closed", edge.first + 1,
                                  edge.second + 1));
    }
  }
  volume_ = six_volume / 6.0;
  if (!(volume_ > 0.0)) throw MeshError("signed volume is not positive; normals point inward");
  volume_centroid_ = moment / six_volume;
}

double TriMesh::winding_number(const Point3& p) const {
  double total = 0.0;
  for (const Triangle& tri : triangles_) {
    const Point3 a = vertices_[static_cast<std::size_t>(tri[0])] - p;
    const Point3 b = vertices_[static_cast<std::size_t>(tri[1])] - p;
    const Point3 c = vertices_[static_cast<std::size_t>(tri[2])] - p;
    const double la = a.norm();
    const double lb = b.norm();
    const double lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    total += 2.0 * std::atan2(num, den);
  }
  return total / (4.0 * kPi);
}

TriMesh make_icosphere(int subdivisions, double radius, const Point3& center) {
  if (subdivisions < 0) throw DomainError("subdivision level must be nonnegative");
  if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Point3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Point3& p : v) p.normalize();
  std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(f.size() * 4);
    for (const Triangle& tri : f) {
      const int ab = mid(tri[0], tri[1]);
      const int bc = mid(tri[1], tri[2]);
      const int ca = mid(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  for (Point3& p : v) p = center + radius * p;
  return TriMesh(std::move(v), std::move(f));
}

namespace {

struct Ring {
  std::vector<int> ids;
};

// Joins two coaxial rings by advancing along whichever ring lags in azimuth.
void stitch(const Ring& a, const Ring& b, std::vector<Triangle>& out) {
  const std::size_t na = a.ids.size();
  const std::size_t nb = b.ids.size();
  if (na == 1 || nb == 1) {
    const Ring& single = na == 1 ? a : b;
    const Ring& loop = na == 1 ? b : a;
    for (std::size_t i = 0; i < loop.ids.size(); ++i) {
      out.push_back({single.ids[0], loop.ids[i], loop.ids[(i + 1) % loop.ids.size()]});
    }
    return;
  }
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < na || j < nb) {
    const double next_a = static_cast<double>(i + 1) / static_cast<double>(na);
    const double next_b = static_cast<double>(j + 1) / static_cast<double>(nb);
    if (j >= nb || (i < na && next_a <= next_b)) {
      out.push_back({a.ids[i % na], a.ids[(i + 1) % na], b.ids[j % nb]});
      ++i;
    } else {
      out.push_back({a.ids[i % na], b.ids[(j + 1) % nb], b.ids[j % nb]});
      ++j;
    }
  }
}

}  // namespace

TriMesh make_capped_cylinder(double radius, double height, double cap_radius, double target_edge) {
  if (!(radius > 0.0) || !(height > 0.0) || !(target_edge > 0.0)) {
    throw DomainError("cylinder radius, height and edge length must be positive");
  }
  if (!(cap_radius >= radius)) throw DomainError("cap sphere radius must be at least the cylinder radius");
  const double rim_drop = cap_radius - std::sqrt(cap_radius * cap_radius - radius * radius);
  if (!(rim_drop < height)) throw DomainError("cap is deeper than the cylinder");

  std::vector<Point3> v;
  std::vector<Ring> rings;
  auto add_ring = [&](double rho, double z) {
    Ring r;
    const int n = rho == 0.0 ? 1 : std::max(6, static_cast<int>(std::ceil(2.0 * kPi * rho / target_edge)));
    for (int i = 0; i < n; ++i) {
      const double phi = 2.0 * kPi * i / n;
      v.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
      r.ids.push_back(static_cast<int>(v.size()) - 1);
    }
    rings.push_back(std::move(r));
  };

  const int n_cap = std::max(2, static_cast<int>(std::ceil(radius / target_edge)));
  add_ring(0.0, 0.0);
  for (int i = 1; i <= n_cap; ++i) {
    const double rho = radius * i / n_cap;
    add_ring(rho, -(cap_radius - std::sqrt(cap_radius * cap_radius - rho * rho)));
  }
  const double side = height - rim_drop;
  const int n_side = std::max(1, static_cast<int>(std::ceil(side / target_edge)));
  for (int i = 1; i <= n_side; ++i) add_ring(radius, -rim_drop - side * i / n_side);
  for (int i = n_cap - 1; i >= 0; --i) add_ring(radius * i / n_cap, -height);

  std::vector<Triangle> f;
  for (std::size_t r = 0; r + 1 < rings.size(); ++r) stitch(rings[r], rings[r + 1], f);

  // Convex body: orient each face away from an interior axis point.
  const Point3 inside(0.0, 0.0, -0.5 * height);
  for (Triangle& tri : f) {
    const Point3& a = v[static_cast<std::size_t>(tri[0])];
    const Point3& b = v[static_cast<std::size_t>(tri[1])];
    const Point3& c = v[static_cast<std::size_t>(tri[2])];
    if ((b - a).cross(c - a).dot((a + b + c) / 3.0 - inside) < 0.0) std::swap(tri[1], tri[2]);
  }
  return TriMesh(std::move(v), std::move(f));
}

}  // namespace beamkit
