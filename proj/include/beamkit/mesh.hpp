#pragma once

#include <array>
#include <vector>

#include "beamkit/core.hpp"

namespace beamkit {

using Triangle = std::array<int, 3>;

/// Closed, consistently oriented triangle surface with outward normals.
///
/// Construction validates the topology: every directed edge occurs once and
/// its reverse occurs once, every triangle has positive area and the signed
/// volume is positive. Self-intersection is not checked.
class TriMesh {
 public:
  TriMesh(std::vector<Point3> vertices, std::vector<Triangle> triangles);

  std::size_t size() const noexcept { return triangles_.size(); }
  const std::vector<Point3>& vertices() const noexcept { return vertices_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }

  const Point3& normal(std::size_t t) const { return normals_[t]; }
  const Point3& centroid(std::size_t t) const { return centroids_[t]; }
  double area(std::size_t t) const { return areas_[t]; }
  /// Longest edge of triangle t.
  double edge_length(std::size_t t) const { return edges_[t]; }
  double max_edge_length() const noexcept { return max_edge_; }

  double volume() const noexcept { return volume_; }
  Point3 volume_centroid() const noexcept { return volume_centroid_; }

  /// Generalized winding number: ~1 inside, ~0 outside.
  double winding_number(const Point3& p) const;
  bool contains(const Point3& p) const { return winding_number(p) > 0.5; }

 private:
  std::vector<Point3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Point3> normals_;
  std::vector<Point3> centroids_;
  std::vector<double> areas_;
  std::vector<double> edges_;
  double max_edge_ = 0.0;
  double volume_ = 0.0;
  Point3 volume_centroid_ = Point3::Zero();
};

/// Icosahedron refined `subdivisions` times with vertices projected onto the
/// sphere; 20 * 4^subdivisions triangles.
TriMesh make_icosphere(int subdivisions, double radius = 1.0, const Point3& center = Point3::Zero());

/// Upright cylinder whose top face is a spherical cap, flat bottom. The apex of
/// the cap sits at z = 0, the bottom face at z = -height. Ring spacing and
/// per-ring vertex counts keep edges near `target_edge`.
TriMesh make_capped_cylinder(double radius, double height, double cap_radius, double target_edge);

}  // namespace beamkit
