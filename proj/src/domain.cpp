#include "sobolev/domain.hpp"

#include <cmath>

#include "sobolev/error.hpp"

namespace sobolev {

void validate_domain(const DomainSpec& domain) {
  if (const auto* d = std::get_if<Disk>(&domain)) {
    if (!(d->radius > 0.0)) throw Error(ErrorCode::InvalidInput, "disk radius must be positive");
  } else if (const auto* p = std::get_if<Polygon>(&domain)) {
    if (p->vertices.size() < 3) throw Error(ErrorCode::InvalidPolygon, "polygon needs 3 vertices");
    if (!polygon_is_simple(p->vertices)) throw Error(ErrorCode::InvalidPolygon, "polygon self-intersects");
    if (!(polygon_signed_area(p->vertices) > 0.0)) {
      throw Error(ErrorCode::InvalidPolygon, "polygon must be counterclockwise");
    }
  } else {
    const auto& m = std::get<MapImage>(domain);
    if (!(m.r > 0.0 && m.r < 1.0)) throw Error(ErrorCode::InvalidInput, "map_image r must lie in (0,1)");
  }
}

TriMesh mesh_domain(const DomainSpec& domain, double h) {
  validate_domain(domain);
  if (const auto* d = std::get_if<Disk>(&domain)) return mesh_disk(d->radius, d->center, h);
  if (const auto* p = std::get_if<Polygon>(&domain)) return mesh_polygon(p->vertices, h);
  const auto& m = std::get<MapImage>(domain);
  return mesh_map_image(m.map, m.r, h);
}

DomainKind classify(const DomainSpec& domain) {
  if (const auto* d = std::get_if<Disk>(&domain)) {
    return d->radius == 1.0 ? DomainKind::UnitDisk : DomainKind::Other;
  }
  if (const auto* p = std::get_if<Polygon>(&domain); p && p->vertices.size() == 4) {
    // Axis-aligned unit square, any translation and starting vertex.
    const auto& v = p->vertices;
    double min_x = v[0].x(), min_y = v[0].y();
    for (const auto& q : v) {
      min_x = std::min(min_x, q.x());
      min_y = std::min(min_y, q.y());
    }
    int corners = 0;
    for (const auto& q : v) {
      const double dx = q.x() - min_x, dy = q.y() - min_y;
      const bool corner_x = std::abs(dx) < 1e-12 || std::abs(dx - 1.0) < 1e-12;
      const bool corner_y = std::abs(dy) < 1e-12 || std::abs(dy - 1.0) < 1e-12;
      corners += corner_x && corner_y;
    }
    if (corners == 4 && std::abs(polygon_signed_area(v) - 1.0) < 1e-12) return DomainKind::UnitSquare;
  }
  return DomainKind::Other;
}

bool is_nonconvex_polygon(const DomainSpec& domain) {
  const auto* p = std::get_if<Polygon>(&domain);
  if (!p) return false;
  const auto& v = p->vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (signed_area(v[i], v[(i + 1) % v.size()], v[(i + 2) % v.size()]) < 0.0) return true;
  }
  return false;
}

}  // namespace sobolev
