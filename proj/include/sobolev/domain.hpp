#pragma once

#include <variant>
#include <vector>

#include "sobolev/conformal_map.hpp"
#include "sobolev/mesh.hpp"

namespace sobolev {

struct Disk {
  double radius = 1.0;
  Point center = Point::Zero();
};

struct Polygon {
  std::vector<Point> vertices;  // counterclockwise, simple
};

struct MapImage {
  ConformalMap map;
  double r = 0.5;
};

using DomainSpec = std::variant<Disk, Polygon, MapImage>;

/// Checks the variant invariants; throws InvalidInput / InvalidPolygon.
void validate_domain(const DomainSpec& domain);

TriMesh mesh_domain(const DomainSpec& domain, double h);

/// Domains with a catalogued closed-form C_p.
enum class DomainKind { UnitDisk, UnitSquare, Other };

DomainKind classify(const DomainSpec& domain);

/// Non-convex polygons get a relaxed convergence-order threshold (corner singularity).
bool is_nonconvex_polygon(const DomainSpec& domain);

}  // namespace sobolev
