#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "sobolev/domain.hpp"
#include "sobolev/error.hpp"

using namespace sobolev;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidInput;
}

const ConformalMap kCayley = ConformalMap::moebius({-1, 0}, {1, 0}, {1, 0}, {1, 0});

void check_valid(const TriMesh& mesh) {
  const auto report = validate_mesh(mesh);
  CHECK(report.min_signed_area > 0.0);
  CHECK(report.conforming);
  CHECK(report.boundary_closed);
  CHECK(report.boundary_flags_consistent);
}

std::vector<Point> unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }
std::vector<Point> l_shape() { return {{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}}; }

}  // namespace

TEST_CASE("eval_map on the three variants") {
  const auto m = ConformalMap::moebius({1, 0}, {-1, 0}, {1, 0}, {1, 0});
  CHECK(eval_map(m, 0.0) == Complex(-1, 0));
  CHECK(eval_map(kCayley, 0.0) == Complex(1, 0));

  const Complex lin = eval_map(ConformalMap::linear({2, 0}), {0.3, 0.4});
  CHECK(lin.real() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(lin.imag() == doctest::Approx(0.8).epsilon(1e-15));

  const auto series = ConformalMap::power_series({{1, 0}, {0.25, 0}});
  CHECK(eval_map(series, 0.5) == Complex(0.5625, 0));
}

TEST_CASE("eval_derivative") {
  CHECK(eval_derivative(kCayley, 0.0) == Complex(-2, 0));
  CHECK(std::abs(eval_derivative(kCayley, 0.0)) == 2.0);
  CHECK(eval_derivative(ConformalMap::linear({1.5, -2}, {3, 1}), {0.7, -0.1}) == Complex(1.5, -2));
  CHECK(eval_derivative(ConformalMap::power_series({{1, 0}, {0.25, 0}}), 0.5) == Complex(1.25, 0));
}

TEST_CASE("derivatives agree with central differences at random interior points") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> radius(0.0, 0.9), angle(0.0, 2 * std::numbers::pi);
  const std::vector<ConformalMap> maps = {
      kCayley, ConformalMap::power_series({{1, 0}, {0.2, 0}}),
      ConformalMap::power_series({{1, 0}, {0, 0}, {0.5, 0}}), ConformalMap::linear({2, 1}, {0.5, 0})};
  const double step = 1e-6;
  for (const auto& map : maps) {
    for (int i = 0; i < 100; ++i) {
      const Complex z = std::polar(radius(rng), angle(rng));
      const Complex fd = (eval_map(map, z + step) - eval_map(map, z - step)) / (2 * step);
      const Complex exact = eval_derivative(map, z);
      CHECK(std::abs(fd - exact) / std::abs(exact) <= 1e-7);
      const Complex fd2 = (eval_derivative(map, z + step) - eval_derivative(map, z - step)) / (2 * step);
      CHECK(std::abs(fd2 - eval_second_derivative(map, z)) <= 1e-6 * std::max(1.0, std::abs(fd2)));
    }
  }
}

TEST_CASE("map construction invariants and poles") {
  CHECK(code_of([] { ConformalMap::moebius({1, 0}, {2, 0}, {2, 0}, {4, 0}); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { ConformalMap::linear({0, 0}); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { ConformalMap::power_series({{0, 0}, {0, 0}}); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { eval_map(kCayley, -1.0); }) == ErrorCode::PoleHit);
  CHECK(code_of([] { eval_derivative(kCayley, -1.0); }) == ErrorCode::PoleHit);
  const auto inside = ConformalMap::moebius({1, 0}, {0, 0}, {1, 0}, {-0.5, 0});
  CHECK(code_of([&] { mesh_map_image(inside, 0.6, 0.1); }) == ErrorCode::PoleHit);
}

TEST_CASE("mesh_disk area and structure") {
  const TriMesh mesh = mesh_disk(1.0, Point::Zero(), 0.05);
  check_valid(mesh);
  CHECK(std::abs(mesh_area(mesh) - std::numbers::pi) / std::numbers::pi < 3e-3);

  const TriMesh big = mesh_disk(2.0, Point(1, -1), 0.1);
  check_valid(big);
  CHECK(std::abs(mesh_area(big) - 4 * std::numbers::pi) / (4 * std::numbers::pi) < 3e-3);

  CHECK(code_of([] { mesh_disk(1.0, Point::Zero(), 0.9); }) == ErrorCode::ResolutionTooCoarse);
  CHECK(code_of([] { mesh_disk(-1.0, Point::Zero(), 0.1); }) == ErrorCode::InvalidInput);
}

TEST_CASE("disk area deficit is second order") {
  auto deficit = [](double h) {
    const double area = mesh_area(mesh_disk(1.0, Point::Zero(), h));
    return (std::numbers::pi - area) / area;
  };
  for (double h : {0.1, 0.05, 0.025}) {
    const double ratio = deficit(h) / deficit(h / 2);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("mesh_polygon exact covers") {
  const auto square = unit_square();
  const TriMesh sq = mesh_polygon(square, 0.02);
  check_valid(sq);
  CHECK(std::abs(mesh_area(sq) - 1.0) < 1e-10);
  CHECK(max_edge_length(sq) <= 1.5 * 0.02);

  const auto l = l_shape();
  const TriMesh lm = mesh_polygon(l, 0.02);
  check_valid(lm);
  CHECK(std::abs(mesh_area(lm) - 0.75) < 1e-10);
  CHECK(max_edge_length(lm) <= 1.5 * 0.02);

  // A collinear vertex on an edge is still a valid polygon.
  const std::vector<Point> notched = {{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
  const TriMesh nm = mesh_polygon(notched, 0.1);
  check_valid(nm);
  CHECK(std::abs(mesh_area(nm) - 1.0) < 1e-12);
}

TEST_CASE("mesh_polygon rejects bad input") {
  const std::vector<Point> clockwise = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CHECK(code_of([&] { mesh_polygon(clockwise, 0.1); }) == ErrorCode::InvalidPolygon);
  const std::vector<Point> bowtie = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK(code_of([&] { mesh_polygon(bowtie, 0.1); }) == ErrorCode::InvalidPolygon);
  const std::vector<Point> two = {{0, 0}, {1, 0}};
  CHECK(code_of([&] { mesh_polygon(two, 0.1); }) == ErrorCode::InvalidPolygon);
}

TEST_CASE("Moebius image of r D is the expected disk") {
  const double r = 0.5;
  const TriMesh mesh = mesh_map_image(kCayley, r, 0.02);
  check_valid(mesh);
  const double radius = 2 * r / (1 - r * r), center = (1 + r * r) / (1 - r * r);
  CHECK(radius == doctest::Approx(4.0 / 3.0));
  CHECK(center == doctest::Approx(5.0 / 3.0));
  const double exact = std::numbers::pi * radius * radius;
  CHECK(std::abs(mesh_area(mesh) - exact) / exact < 5e-3);

  for (double rr : {0.1, 0.5, 0.9}) {
    const TriMesh m = mesh_map_image(kCayley, rr, 0.05);
    const double rad = 2 * rr / (1 - rr * rr), cen = (1 + rr * rr) / (1 - rr * rr);
    double worst = 0.0;
    for (const auto& e : m.boundary_edges()) {
      worst = std::max(worst, std::abs((m.vertex(e[0]) - Point(cen, 0)).norm() - rad));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("identity map image is the scaled disk mesh") {
  const double r = 0.3, h = 0.05;
  const TriMesh image = mesh_map_image(ConformalMap::linear({1, 0}), r, h);
  const TriMesh disk = mesh_disk(1.0, Point::Zero(), map_image_resolution(ConformalMap::linear({1, 0}), r, h));
  REQUIRE(image.num_vertices() == disk.num_vertices());
  REQUIRE(image.num_triangles() == disk.num_triangles());
  double worst = 0.0;
  for (std::size_t v = 0; v < disk.num_vertices(); ++v) {
    worst = std::max(worst, (image.vertices()[v] - r * disk.vertices()[v]).norm());
  }
  CHECK(worst < 1e-15);
  CHECK(map_image_resolution(ConformalMap::linear({1, 0}), r, h) == h);
}

TEST_CASE("non-univalent images fold") {
  // f(z) = z + z^2 has f'(-1/2) = 0, inside 0.9 D.
  const auto f = ConformalMap::power_series({{1, 0}, {1, 0}});
  CHECK(code_of([&] { mesh_map_image(f, 0.9, 0.05); }) == ErrorCode::FoldedMesh);
  CHECK(code_of([&] { mesh_map_image(ConformalMap::power_series({{1, 0}, {0, 0}, {0.5, 0}}), 0.9, 0.05); }) ==
        ErrorCode::FoldedMesh);
  CHECK_NOTHROW(mesh_map_image(f, 0.4, 0.05));
}

TEST_CASE("rigid motions and dilations preserve validity") {
  const TriMesh base = mesh_polygon(l_shape(), 0.1);
  const TriMesh moved = transformed(base, 2.0, 0.7, Point(3, -1));
  check_valid(moved);
  CHECK(mesh_area(moved) == doctest::Approx(4 * 0.75).epsilon(1e-12));
}

TEST_CASE("domain classification") {
  CHECK(classify(Disk{}) == DomainKind::UnitDisk);
  CHECK(classify(Disk{.radius = 2}) == DomainKind::Other);
  CHECK(classify(Polygon{unit_square()}) == DomainKind::UnitSquare);
  CHECK(classify(Polygon{l_shape()}) == DomainKind::Other);
  CHECK(is_nonconvex_polygon(Polygon{l_shape()}));
  CHECK_FALSE(is_nonconvex_polygon(Polygon{unit_square()}));
}
