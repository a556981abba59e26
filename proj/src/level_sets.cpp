#include "sobolev/level_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sobolev/error.hpp"

namespace sobolev {

namespace {

struct ClipResult {
  Point vertices[4];
  double values[4];
  int count = 0;
  double contour = 0.0;
};

/// Part of the triangle where the linear interpolant is >= t (at most a quadrilateral),
/// plus the length of the {u = t} segment crossing it.
ClipResult clip_triangle(const Point* p, const double* u, double t) {
  ClipResult out;
  Point crossing[2];
  int crossings = 0;
  for (int k = 0; k < 3; ++k) {
    const int n = (k + 1) % 3;
    const bool in_k = u[k] >= t, in_n = u[n] >= t;
    if (in_k) {
      out.vertices[out.count] = p[k];
      out.values[out.count++] = u[k];
    }
    if (in_k != in_n) {
      const double s = (t - u[k]) / (u[n] - u[k]);
      const Point x = p[k] + s * (p[n] - p[k]);
      out.vertices[out.count] = x;
      out.values[out.count++] = t;
      if (crossings < 2) crossing[crossings++] = x;
    }
  }
  if (crossings == 2) out.contour = (crossing[0] - crossing[1]).norm();
  return out;
}

}  // namespace

LevelSetTable level_set_table(const SolveResult& result, std::optional<Point> base_point, int samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidInput, "need at least 2 level samples");
  const ScalarField& phi = result.phi;
  const TriMesh& mesh = phi.mesh();
  const Vector& u = phi.values();
  const double p = result.p;
  const auto& rule = degree4_rule();

  LevelSetTable table;
  table.p = p;
  table.lambda = result.lambda;
  table.phi_max = u.maxCoeff();
  table.base_point = base_point.value_or(mesh_centroid(mesh));

  double perimeter = 0.0;
  for (const auto& e : mesh.boundary_edges()) perimeter += (mesh.vertex(e[0]) - mesh.vertex(e[1])).norm();

  std::vector<ElementGeometry> geometry;
  geometry.reserve(mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) geometry.push_back(element_geometry(mesh, t));

  for (int i = 0; i < samples; ++i) {
    LevelSetRow row;
    row.t = i == samples - 1 ? table.phi_max : table.phi_max * i / (samples - 1);
    row.regular = i > 0 && i < samples - 1;
    for (Eigen::Index v = 0; v < u.size() && row.regular; ++v) row.regular = u[v] != row.t;

    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const auto& tri = mesh.triangles()[t];
      const Point corners[3] = {mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2])};
      const double values[3] = {u[tri[0]], u[tri[1]], u[tri[2]]};
      if (std::max({values[0], values[1], values[2]}) < row.t) continue;
      const ClipResult clip = clip_triangle(corners, values, row.t);
      row.length += clip.contour;

      const auto& g = geometry[t];
      const Eigen::Vector2d grad = values[0] * g.grad[0] + values[1] * g.grad[1] + values[2] * g.grad[2];
      for (int k = 1; k + 1 < clip.count; ++k) {
        const Point* q[3] = {&clip.vertices[0], &clip.vertices[k], &clip.vertices[k + 1]};
        const double qv[3] = {clip.values[0], clip.values[k], clip.values[k + 1]};
        const double area = signed_area(*q[0], *q[1], *q[2]);
        if (!(area > 0.0)) continue;
        row.area += area;
        double h0 = 0.0, h1 = 0.0;
        for (std::size_t j = 0; j < rule.weights.size(); ++j) {
          const auto& b = rule.points[j];
          const double value = std::max(b[0] * qv[0] + b[1] * qv[1] + b[2] * qv[2], 0.0);
          const Point x = b[0] * *q[0] + b[1] * *q[1] + b[2] * *q[2];
          const double weight = p == 1.0 ? 1.0 : std::pow(value, p - 1.0);
          h0 += rule.weights[j] * weight;
          h1 += rule.weights[j] * weight * grad.dot(x - table.base_point);
        }
        row.h0 += area * h0;
        row.h1 += area * h1;
      }
    }
    row.h1 *= -0.5 * p;
    if (i == 0) row.length = perimeter;
    table.rows.push_back(row);
  }
  return table;
}

LevelSetVerdicts verify_levelset_inequalities(const LevelSetTable& table, double p) {
  const auto& rows = table.rows;
  const double eight_pi = 8.0 * std::numbers::pi;
  LevelSetVerdicts verdicts;
  verdicts.coarea_bound = verdicts.h1_identity = verdicts.combined_monotone = true;
  verdicts.worst_coarea_margin = verdicts.worst_combined_margin = -std::numeric_limits<double>::infinity();

  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    if (!rows[i].regular) continue;
    ++verdicts.usable_rows;
    const auto& prev = rows[i - 1];
    const auto& next = rows[i + 1];
    const double dt = next.t - prev.t;
    const double dh0_sq = (next.h0 * next.h0 - prev.h0 * prev.h0) / dt;
    const double dh1 = (next.h1 - prev.h1) / dt;
    const double t_pow = std::pow(rows[i].t, p - 1.0);

    const double bound = -eight_pi * rows[i].area * t_pow / table.lambda;
    const double scale_a = std::max(std::abs(dh0_sq), std::abs(bound));
    const double margin_a = scale_a > 0.0 ? (dh0_sq - bound) / scale_a : 0.0;
    verdicts.worst_coarea_margin = std::max(verdicts.worst_coarea_margin, margin_a);
    verdicts.coarea_bound = verdicts.coarea_bound && margin_a <= kLevelSetSlack;

    const double expected = -p * t_pow * rows[i].area;
    const double error_b = expected != 0.0 ? std::abs(dh1 - expected) / std::abs(expected)
                                           : std::abs(dh1);
    verdicts.worst_h1_error = std::max(verdicts.worst_h1_error, error_b);
    verdicts.h1_identity = verdicts.h1_identity && error_b <= kH1IdentityTolerance;

    const double weighted_dh1 = eight_pi / (p * table.lambda) * dh1;
    const double combined = dh0_sq - weighted_dh1;
    const double scale_c = std::max(std::abs(dh0_sq), std::abs(weighted_dh1));
    const double margin_c = scale_c > 0.0 ? combined / scale_c : 0.0;
    verdicts.worst_combined_margin = std::max(verdicts.worst_combined_margin, margin_c);
    verdicts.combined_monotone = verdicts.combined_monotone && margin_c <= kLevelSetSlack;
  }
  if (verdicts.usable_rows < kMinUsableLevelRows) {
    throw Error(ErrorCode::InsufficientRegularRows, "fewer than 8 regular level-set rows");
  }
  return verdicts;
}

}  // namespace sobolev
