#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sobolev/conformal_map.hpp"

namespace sobolev {

using Point = Eigen::Vector2d;
using Triangle = std::array<int, 3>;
using Edge = std::array<int, 2>;

/// Conforming planar triangulation with tagged boundary. Immutable once built;
/// the constructor rejects any triangle with non-positive signed area.
class TriMesh {
 public:
  TriMesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
          std::vector<Edge> boundary_edges, double h);

  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }
  std::span<const Edge> boundary_edges() const noexcept { return boundary_edges_; }
  bool is_boundary(int v) const noexcept { return boundary_[static_cast<std::size_t>(v)] != 0; }

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_triangles() const noexcept { return triangles_.size(); }
  std::size_t num_interior() const noexcept { return num_interior_; }

  /// Resolution the mesh was generated at (for disks: the actual ring spacing).
  double h() const noexcept { return h_; }

  const Point& vertex(int v) const noexcept { return vertices_[static_cast<std::size_t>(v)]; }

 private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> boundary_edges_;
  std::vector<char> boundary_;
  std::size_t num_interior_ = 0;
  double h_;
};

double signed_area(const Point& a, const Point& b, const Point& c);
double triangle_area(const TriMesh& mesh, std::size_t t);
double mesh_area(const TriMesh& mesh);
double max_edge_length(const TriMesh& mesh);
Point mesh_centroid(const TriMesh& mesh);

/// Applies x -> scale * R(angle) x + shift to every vertex.
TriMesh transformed(const TriMesh& mesh, double scale, double angle = 0.0,
                    const Point& shift = Point::Zero());

/// Structured polar mesh: ceil(radius / h) rings, ring k carries 6k vertices.
TriMesh mesh_disk(double radius, const Point& center, double h);

/// Counterclockwise simple polygon. Coarse ear-clipping triangulation followed by a
/// uniform n-fold subdivision of every coarse triangle (n shared globally so the
/// refined mesh stays conforming).
TriMesh mesh_polygon(std::span<const Point> polygon, double h);

/// Unit-disk resolution used for the push-forward mesh of f(r D): h, refined where
/// log|f'| varies quickly on r D and floored at h / 8.
double map_image_resolution(const ConformalMap& map, double r, double h);

/// Push-forward z -> f(r z) of the unit-disk mesh at map_image_resolution.
/// Throws FoldedMesh if an image triangle is inverted or the image boundary
/// self-intersects; PoleHit if f has a pole on |z| <= r.
TriMesh mesh_map_image(const ConformalMap& map, double r, double h);

/// Structural check used by tests: orientation, conformity, closed boundary loops.
struct MeshReport {
  double min_signed_area = 0.0;
  bool conforming = false;
  bool boundary_closed = false;
  bool boundary_flags_consistent = false;
};
MeshReport validate_mesh(const TriMesh& mesh);

bool polygon_is_simple(std::span<const Point> polygon);
double polygon_signed_area(std::span<const Point> polygon);

}  // namespace sobolev
