#include "sobolev/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <unordered_map>

#include "sobolev/error.hpp"

namespace sobolev {

TriMesh::TriMesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
                 std::vector<Edge> boundary_edges, double h)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)),
      boundary_(vertices_.size(), 0),
      h_(h) {
  const int nv = static_cast<int>(vertices_.size());
  for (const auto& t : triangles_) {
    for (int v : t) {
      if (v < 0 || v >= nv) throw Error(ErrorCode::InvalidInput, "triangle index out of range");
    }
    if (!(signed_area(vertex(t[0]), vertex(t[1]), vertex(t[2])) > 0.0)) {
      throw Error(ErrorCode::FoldedMesh, "triangle with non-positive signed area");
    }
  }
  for (const auto& e : boundary_edges_) {
    boundary_[static_cast<std::size_t>(e[0])] = 1;
    boundary_[static_cast<std::size_t>(e[1])] = 1;
  }
  num_interior_ = static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), 0));
}

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double triangle_area(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles()[t];
  return signed_area(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]));
}

double mesh_area(const TriMesh& mesh) {
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) sum += triangle_area(mesh, t);
  return sum;
}

double max_edge_length(const TriMesh& mesh) {
  double longest = 0.0;
  for (const auto& t : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      longest = std::max(longest, (mesh.vertex(t[k]) - mesh.vertex(t[(k + 1) % 3])).norm());
    }
  }
  return longest;
}

Point mesh_centroid(const TriMesh& mesh) {
  Point weighted = Point::Zero();
  double area = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const double a = triangle_area(mesh, t);
    weighted += a * (mesh.vertex(tri[0]) + mesh.vertex(tri[1]) + mesh.vertex(tri[2])) / 3.0;
    area += a;
  }
  return weighted / area;
}

TriMesh transformed(const TriMesh& mesh, double scale, double angle, const Point& shift) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidInput, "scale must be positive");
  Eigen::Matrix2d rot;
  rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  std::vector<Point> moved;
  moved.reserve(mesh.num_vertices());
  for (const auto& v : mesh.vertices()) {
    moved.push_back(angle == 0.0 ? Point(scale * v + shift) : Point(scale * (rot * v) + shift));
  }
  return TriMesh(std::move(moved), {mesh.triangles().begin(), mesh.triangles().end()},
                 {mesh.boundary_edges().begin(), mesh.boundary_edges().end()}, scale * mesh.h());
}

// ---------------------------------------------------------------------------
// Disk

TriMesh mesh_disk(double radius, const Point& center, double h) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "disk radius must be positive");
  if (!(h > 0.0) || !(h < radius)) throw Error(ErrorCode::InvalidInput, "need 0 < h < radius");
  const int rings = static_cast<int>(std::ceil(radius / h * (1.0 - 1e-12)));
  if (rings < 3) {
    throw Error(ErrorCode::ResolutionTooCoarse, "disk mesh needs at least 3 rings");
  }

  // Ring k (k >= 1) starts at vertex 1 + 3k(k-1) and has 6k vertices.
  auto ring_start = [](int k) { return k == 0 ? 0 : 1 + 3 * k * (k - 1); };
  auto ring_size = [](int k) { return k == 0 ? 1 : 6 * k; };

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(ring_start(rings + 1)));
  vertices.push_back(center);
  for (int k = 1; k <= rings; ++k) {
    const double rho = radius * k / rings;
    const int n = ring_size(k);
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n;
      vertices.emplace_back(center.x() + rho * std::cos(theta), center.y() + rho * std::sin(theta));
    }
  }

  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(6 * rings * rings));
  for (int k = 1; k <= rings; ++k) {
    const int n_in = ring_size(k - 1), n_out = ring_size(k);
    const int s_in = ring_start(k - 1), s_out = ring_start(k);
    if (k == 1) {
      for (int j = 0; j < n_out; ++j) {
        triangles.push_back({0, s_out + j, s_out + (j + 1) % n_out});
      }
      continue;
    }
    // Merge the two rings by angle: advance whichever ring's next vertex comes first.
    int i = 0, j = 0;
    while (i < n_in || j < n_out) {
      const double next_in = static_cast<double>(i + 1) / n_in;
      const double next_out = static_cast<double>(j + 1) / n_out;
      if (i == n_in || (j < n_out && next_out <= next_in)) {
        triangles.push_back({s_in + i % n_in, s_out + j, s_out + (j + 1) % n_out});
        ++j;
      } else {
        triangles.push_back({s_in + i, s_out + j % n_out, s_in + (i + 1) % n_in});
        ++i;
      }
    }
  }

  std::vector<Edge> boundary;
  const int s = ring_start(rings), n = ring_size(rings);
  for (int j = 0; j < n; ++j) boundary.push_back({s + j, s + (j + 1) % n});

  return TriMesh(std::move(vertices), std::move(triangles), std::move(boundary), radius / rings);
}

// ---------------------------------------------------------------------------
// Polygons

namespace {

int orientation_sign(const Point& a, const Point& b, const Point& c) {
  const double s = signed_area(a, b, c);
  return (s > 0.0) - (s < 0.0);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation_sign(p1, p2, q1), o2 = orientation_sign(p1, p2, q2);
  const int o3 = orientation_sign(q1, q2, p1), o4 = orientation_sign(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
         (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

bool point_in_closed_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
  return signed_area(a, b, p) >= 0.0 && signed_area(b, c, p) >= 0.0 &&
         signed_area(c, a, p) >= 0.0;
}

double min_angle(const Point& a, const Point& b, const Point& c) {
  auto angle = [](const Point& apex, const Point& u, const Point& v) {
    const Point du = u - apex, dv = v - apex;
    return std::acos(std::clamp(du.dot(dv) / (du.norm() * dv.norm()), -1.0, 1.0));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

std::vector<Triangle> ear_clip(std::span<const Point> poly) {
  std::vector<int> remaining(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) remaining[i] = static_cast<int>(i);

  std::vector<Triangle> coarse;
  while (remaining.size() > 3) {
    const std::size_t m = remaining.size();
    double best_quality = -1.0;
    std::size_t best = m;
    for (std::size_t i = 0; i < m; ++i) {
      const int ip = remaining[(i + m - 1) % m], ic = remaining[i], in = remaining[(i + 1) % m];
      const Point &a = poly[ip], &b = poly[ic], &c = poly[in];
      if (!(signed_area(a, b, c) > 0.0)) continue;
      bool blocked = false;
      for (std::size_t k = 0; k < m && !blocked; ++k) {
        const int v = remaining[k];
        if (v == ip || v == ic || v == in) continue;
        blocked = point_in_closed_triangle(poly[v], a, b, c);
      }
      if (blocked) continue;
      const double quality = min_angle(a, b, c);
      if (quality > best_quality) {
        best_quality = quality;
        best = i;
      }
    }
    if (best == m) throw Error(ErrorCode::InvalidPolygon, "no ear found while triangulating");
    coarse.push_back({remaining[(best + m - 1) % m], remaining[best], remaining[(best + 1) % m]});
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  if (!(signed_area(poly[remaining[0]], poly[remaining[1]], poly[remaining[2]]) > 0.0)) {
    throw Error(ErrorCode::InvalidPolygon, "degenerate final ear");
  }
  coarse.push_back({remaining[0], remaining[1], remaining[2]});
  return coarse;
}

}  // namespace

double polygon_signed_area(std::span<const Point> polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % polygon.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

bool polygon_is_simple(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (polygon[i] == polygon[j]) return false;
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

TriMesh mesh_polygon(std::span<const Point> polygon, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidInput, "h must be positive");
  if (polygon.size() < 3) throw Error(ErrorCode::InvalidPolygon, "polygon needs 3 vertices");
  if (!polygon_is_simple(polygon)) throw Error(ErrorCode::InvalidPolygon, "polygon self-intersects");
  if (!(polygon_signed_area(polygon) > 0.0)) {
    throw Error(ErrorCode::InvalidPolygon, "polygon must be counterclockwise");
  }

  const auto coarse = ear_clip(polygon);
  double longest = 0.0;
  for (const auto& t : coarse) {
    for (int k = 0; k < 3; ++k) {
      longest = std::max(longest, (polygon[t[k]] - polygon[t[(k + 1) % 3]]).norm());
    }
  }
  const int n = std::max(1, static_cast<int>(std::ceil(longest / h * (1.0 - 1e-12))));

  std::vector<Point> vertices(polygon.begin(), polygon.end());
  // Points interior to coarse edge (lo, hi) at parameter k/n measured from lo.
  std::map<std::array<int, 3>, int> edge_points;
  auto edge_point = [&](int u, int v, int i) {
    const int lo = std::min(u, v), hi = std::max(u, v);
    const int k = u == lo ? i : n - i;
    auto [it, inserted] = edge_points.try_emplace({lo, hi, k}, static_cast<int>(vertices.size()));
    if (inserted) {
      vertices.push_back(polygon[lo] + (static_cast<double>(k) / n) * (polygon[hi] - polygon[lo]));
    }
    return it->second;
  };

  std::vector<Triangle> triangles;
  triangles.reserve(coarse.size() * static_cast<std::size_t>(n * n));
  std::vector<int> lattice(static_cast<std::size_t>((n + 1) * (n + 1)), -1);
  for (const auto& t : coarse) {
    const int a = t[0], b = t[1], c = t[2];
    auto at = [&](int i, int j) -> int& { return lattice[static_cast<std::size_t>(i * (n + 1) + j)]; };
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) {
        int id;
        if (i == 0 && j == 0) id = a;
        else if (i == n) id = b;
        else if (j == n) id = c;
        else if (j == 0) id = edge_point(a, b, i);
        else if (i == 0) id = edge_point(a, c, j);
        else if (i + j == n) id = edge_point(b, c, j);
        else {
          id = static_cast<int>(vertices.size());
          vertices.push_back(polygon[a] + (static_cast<double>(i) / n) * (polygon[b] - polygon[a]) +
                             (static_cast<double>(j) / n) * (polygon[c] - polygon[a]));
        }
        at(i, j) = id;
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; i + j < n; ++j) {
        triangles.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
        if (i + j + 2 <= n) triangles.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
      }
    }
  }

  std::vector<Edge> boundary;
  const int nv = static_cast<int>(polygon.size());
  for (int v = 0; v < nv; ++v) {
    const int w = (v + 1) % nv;
    int prev = v;
    for (int i = 1; i < n; ++i) {
      const int next = edge_point(v, w, i);
      boundary.push_back({prev, next});
      prev = next;
    }
    boundary.push_back({prev, w});
  }
  return TriMesh(std::move(vertices), std::move(triangles), std::move(boundary), h);
}

// ---------------------------------------------------------------------------
// Conformal images

double map_image_resolution(const ConformalMap& map, double r, double h) {
  // Largest |d/dz log f'(r z)| over the closed unit disk, sampled on a polar grid.
  constexpr int kRadial = 32, kAngular = 128;
  double steepest = 0.0;
  for (int i = 0; i <= kRadial; ++i) {
    for (int j = 0; j < (i == 0 ? 1 : kAngular); ++j) {
      const Complex z = std::polar(r * i / kRadial, 2.0 * std::numbers::pi * j / kAngular);
      const double d1 = std::abs(eval_derivative(map, z));
      const double d2 = std::abs(eval_second_derivative(map, z));
      steepest = d1 > 0.0 ? std::max(steepest, r * d2 / d1) : std::numeric_limits<double>::infinity();
    }
  }
  constexpr double kCellsPerScale = 0.25;
  const double refined = steepest > 0.0 ? kCellsPerScale / steepest : h;
  return std::clamp(refined, h / 8.0, h);
}

TriMesh mesh_map_image(const ConformalMap& map, double r, double h) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::InvalidInput, "need 0 < r < 1");
  check_analytic_on_disk(map, r);
  const double disk_h = map_image_resolution(map, r, h);
  const TriMesh disk = mesh_disk(1.0, Point::Zero(), disk_h);

  std::vector<Point> image;
  image.reserve(disk.num_vertices());
  for (const auto& v : disk.vertices()) {
    const Complex w = eval_map(map, r * Complex(v.x(), v.y()));
    image.emplace_back(w.real(), w.imag());
  }
  for (const auto& t : disk.triangles()) {
    if (!(signed_area(image[t[0]], image[t[1]], image[t[2]]) > 0.0)) {
      throw Error(ErrorCode::FoldedMesh, "image triangle inverted; f is not univalent on r D");
    }
  }
  std::vector<Point> outline;
  for (const auto& e : disk.boundary_edges()) outline.push_back(image[e[0]]);
  if (!polygon_is_simple(outline)) {
    throw Error(ErrorCode::FoldedMesh, "image boundary self-intersects");
  }
  return TriMesh(std::move(image), {disk.triangles().begin(), disk.triangles().end()},
                 {disk.boundary_edges().begin(), disk.boundary_edges().end()}, disk_h);
}

// ---------------------------------------------------------------------------

MeshReport validate_mesh(const TriMesh& mesh) {
  MeshReport report;
  report.min_signed_area = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    report.min_signed_area = std::min(report.min_signed_area, triangle_area(mesh, t));
  }

  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  };
  std::unordered_map<std::uint64_t, int> directed;
  bool ok = true;
  for (const auto& t : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      ok = ok && ++directed[key(t[k], t[(k + 1) % 3])] == 1;
    }
  }
  // Edges used by exactly one triangle must be exactly the boundary edges.
  std::size_t single = 0;
  for (const auto& [k, count] : directed) {
    const int a = static_cast<int>(k >> 32), b = static_cast<int>(k & 0xffffffffu);
    if (!directed.contains(key(b, a))) ++single;
  }
  for (const auto& e : mesh.boundary_edges()) ok = ok && directed.contains(key(e[0], e[1])) &&
                                                   !directed.contains(key(e[1], e[0]));
  report.conforming = ok && single == mesh.boundary_edges().size();

  std::vector<int> out_degree(mesh.num_vertices(), 0), in_degree(mesh.num_vertices(), 0);
  for (const auto& e : mesh.boundary_edges()) {
    ++out_degree[static_cast<std::size_t>(e[0])];
    ++in_degree[static_cast<std::size_t>(e[1])];
  }
  bool closed = !mesh.boundary_edges().empty();
  bool flags = true;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const bool on_edge = out_degree[v] + in_degree[v] > 0;
    if (on_edge && (out_degree[v] != 1 || in_degree[v] != 1)) closed = false;
    if (on_edge != mesh.is_boundary(static_cast<int>(v))) flags = false;
  }
  report.boundary_closed = closed;
  report.boundary_flags_consistent = flags;
  return report;
}

}  // namespace sobolev
