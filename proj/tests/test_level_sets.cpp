#include <cmath>
#include <numbers>

#include <doctest.h>

#include "sobolev/domain.hpp"
#include "sobolev/error.hpp"
#include "sobolev/level_sets.hpp"

using namespace sobolev;

namespace {

SolveResult solve(const TriMesh& mesh, double p) {
  SolverConfig config;
  config.p = p;
  return minimize_quotient(std::make_shared<const TriMesh>(mesh), config);
}

const std::vector<Point> kSquare = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};

}  // namespace

TEST_CASE("table structure") {
  const TriMesh mesh = mesh_disk(1.0, Point::Zero(), 0.04);
  const auto result = solve(mesh, 2.0);
  const auto table = level_set_table(result);
  REQUIRE(table.rows.size() == static_cast<std::size_t>(kDefaultLevelSamples));
  CHECK(table.p == 2.0);
  CHECK(table.lambda == result.lambda);
  CHECK(table.phi_max == result.phi.values().maxCoeff());
  CHECK(table.rows.front().t == 0.0);
  CHECK(table.rows.back().t == table.phi_max);
  CHECK_FALSE(table.rows.front().regular);
  CHECK_FALSE(table.rows.back().regular);
  CHECK((table.base_point - mesh_centroid(mesh)).norm() < 1e-15);

  // t = 0 is the whole domain.
  const auto& base = table.rows.front();
  CHECK(base.area == doctest::Approx(mesh_area(mesh)).epsilon(1e-12));
  CHECK(base.h0 == doctest::Approx(result.pminus1_integral).epsilon(1e-10));
  CHECK(std::abs(base.length - 2 * std::numbers::pi) < 0.01);

  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].t > table.rows[i - 1].t);
    CHECK(table.rows[i].area <= table.rows[i - 1].area);
    CHECK(table.rows[i].h0 <= table.rows[i - 1].h0);
  }
  CHECK(table.rows.back().area < 1e-3);
}

TEST_CASE("superlevel sets of the disk torsion function are concentric disks") {
  // The p = 1 minimiser is proportional to 1 - r^2, so {phi >= t} has radius sqrt(1 - t/phi_max).
  const auto table = level_set_table(solve(mesh_disk(1.0, Point::Zero(), 0.02), 1.0), std::nullopt, 17);
  for (const auto& row : table.rows) {
    if (!row.regular) continue;
    const double rho = std::sqrt(1 - row.t / table.phi_max);
    CHECK(std::abs(row.area - std::numbers::pi * rho * rho) < 5e-3);
    CHECK(std::abs(row.length - 2 * std::numbers::pi * rho) < 5e-3);
  }
}

TEST_CASE("verdicts pass on the disk and the square") {
  for (const auto& mesh : {mesh_disk(1.0, Point::Zero(), 0.04), mesh_polygon(kSquare, 0.04)}) {
    for (double p : {1.0, 2.0}) {
      CAPTURE(p);
      const auto table = level_set_table(solve(mesh, p));
      const auto verdicts = verify_levelset_inequalities(table, p);
      CHECK(verdicts.coarea_bound);
      CHECK(verdicts.h1_identity);
      CHECK(verdicts.combined_monotone);
      CHECK(verdicts.all_pass());
      CHECK(verdicts.usable_rows >= kMinUsableLevelRows);
      CHECK(verdicts.worst_h1_error <= kH1IdentityTolerance);
    }
  }
}

TEST_CASE("H1 does not depend on the base point") {
  const auto result = solve(mesh_polygon(kSquare, 0.04), 2.0);
  const auto centred = level_set_table(result);
  const auto shifted = level_set_table(result, Point(0.6, 0.45));
  for (std::size_t i = 0; i < centred.rows.size(); ++i) {
    if (!centred.rows[i].regular) continue;
    CHECK(std::abs(shifted.rows[i].h1 / centred.rows[i].h1 - 1) < 0.05);
  }
}

TEST_CASE("too few samples") {
  const auto result = solve(mesh_disk(1.0, Point::Zero(), 0.1), 2.0);
  const auto table = level_set_table(result, std::nullopt, 6);
  try {
    verify_levelset_inequalities(table, 2.0);
    FAIL("expected InsufficientRegularRows");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientRegularRows);
  }
  CHECK_THROWS_AS(level_set_table(result, std::nullopt, 1), Error);
}
