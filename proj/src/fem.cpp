#include "sobolev/fem.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include <Eigen/IterativeLinearSolvers>

#include "sobolev/error.hpp"

namespace sobolev {

ScalarField::ScalarField(std::shared_ptr<const TriMesh> mesh, Vector values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != mesh_->num_vertices()) {
    throw Error(ErrorCode::InvalidInput, "field length differs from vertex count");
  }
  zero_on_boundary_ = true;
  for (const auto& e : mesh_->boundary_edges()) {
    zero_on_boundary_ = zero_on_boundary_ && values_[e[0]] == 0.0 && values_[e[1]] == 0.0;
  }
}

const QuadratureRule& degree4_rule() {
  static const QuadratureRule rule = [] {
    constexpr double a = 0.445948490915965, wa = 0.223381589678011;
    constexpr double b = 0.091576213509771, wb = 0.109951743655322;
    QuadratureRule q;
    q.points = {{a, a, 1 - 2 * a}, {a, 1 - 2 * a, a}, {1 - 2 * a, a, a},
                {b, b, 1 - 2 * b}, {b, 1 - 2 * b, b}, {1 - 2 * b, b, b}};
    q.weights = {wa, wa, wa, wb, wb, wb};
    q.degree = 4;
    return q;
  }();
  return rule;
}

ElementGeometry element_geometry(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles()[t];
  const Point& p0 = mesh.vertex(tri[0]);
  const Point& p1 = mesh.vertex(tri[1]);
  const Point& p2 = mesh.vertex(tri[2]);
  const double area = signed_area(p0, p1, p2);
  const double s = 0.5 / area;
  return {area,
          {Eigen::Vector2d(s * (p1.y() - p2.y()), s * (p2.x() - p1.x())),
           Eigen::Vector2d(s * (p2.y() - p0.y()), s * (p0.x() - p2.x())),
           Eigen::Vector2d(s * (p0.y() - p1.y()), s * (p1.x() - p0.x()))}};
}

namespace {

Eigen::Vector2d element_gradient(const TriMesh& mesh, const Vector& u, std::size_t t,
                                 const ElementGeometry& g) {
  const auto& tri = mesh.triangles()[t];
  return u[tri[0]] * g.grad[0] + u[tri[1]] * g.grad[1] + u[tri[2]] * g.grad[2];
}

void check_exponent(double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponent, "p must be >= 1");
}

}  // namespace

Vector StiffnessOperator::gather(const Vector& full) const {
  Vector out(static_cast<Eigen::Index>(interior_to_global.size()));
  for (std::size_t i = 0; i < interior_to_global.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = full[interior_to_global[i]];
  }
  return out;
}

Vector StiffnessOperator::scatter(const Vector& interior) const {
  Vector full = Vector::Zero(static_cast<Eigen::Index>(global_to_interior.size()));
  for (std::size_t i = 0; i < interior_to_global.size(); ++i) {
    full[interior_to_global[i]] = interior[static_cast<Eigen::Index>(i)];
  }
  return full;
}

SparseMatrix assemble_full_stiffness(const TriMesh& mesh) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(9 * mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = element_geometry(mesh, t);
    const auto& tri = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        entries.emplace_back(tri[i], tri[j], g.area * g.grad[i].dot(g.grad[j]));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.num_vertices());
  SparseMatrix K(n, n);
  K.setFromTriplets(entries.begin(), entries.end());
  return K;
}

StiffnessOperator assemble_stiffness(std::shared_ptr<const TriMesh> mesh) {
  if (mesh->num_interior() == 0) {
    throw Error(ErrorCode::NoInteriorVertices, "mesh has no interior degrees of freedom");
  }
  StiffnessOperator op;
  op.global_to_interior.assign(mesh->num_vertices(), -1);
  for (std::size_t v = 0; v < mesh->num_vertices(); ++v) {
    if (!mesh->is_boundary(static_cast<int>(v))) {
      op.global_to_interior[v] = static_cast<int>(op.interior_to_global.size());
      op.interior_to_global.push_back(static_cast<int>(v));
    }
  }

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(9 * mesh->num_triangles());
  for (std::size_t t = 0; t < mesh->num_triangles(); ++t) {
    const auto g = element_geometry(*mesh, t);
    const auto& tri = mesh->triangles()[t];
    for (int i = 0; i < 3; ++i) {
      const int row = op.global_to_interior[static_cast<std::size_t>(tri[i])];
      if (row < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int col = op.global_to_interior[static_cast<std::size_t>(tri[j])];
        if (col >= 0) entries.emplace_back(row, col, g.area * g.grad[i].dot(g.grad[j]));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(op.interior_to_global.size());
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(entries.begin(), entries.end());
  op.mesh = std::move(mesh);
  return op;
}

double dirichlet_energy(const ScalarField& field) {
  const auto& mesh = field.mesh();
  double energy = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = element_geometry(mesh, t);
    energy += g.area * element_gradient(mesh, field.values(), t, g).squaredNorm();
  }
  return energy;
}

double integrate_power(const ScalarField& field, double p) {
  check_exponent(p);
  const auto& mesh = field.mesh();
  const auto& rule = degree4_rule();
  const Vector& u = field.values();
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    double local = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& b = rule.points[q];
      const double value = std::max(b[0] * u[tri[0]] + b[1] * u[tri[1]] + b[2] * u[tri[2]], 0.0);
      local += rule.weights[q] * (p == 1.0 ? value : std::pow(value, p));
    }
    total += triangle_area(mesh, t) * local;
  }
  return total;
}

Vector weak_power_load_full(const ScalarField& field, double p) {
  check_exponent(p);
  const auto& mesh = field.mesh();
  const auto& rule = degree4_rule();
  const Vector& u = field.values();
  Vector load = Vector::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const double area = triangle_area(mesh, t);
    Eigen::Vector3d local = Eigen::Vector3d::Zero();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& b = rule.points[q];
      double weight = 1.0;
      if (p != 1.0) {
        const double value = std::max(b[0] * u[tri[0]] + b[1] * u[tri[1]] + b[2] * u[tri[2]], 0.0);
        weight = p == 2.0 ? value : std::pow(value, p - 1.0);
      }
      local += (rule.weights[q] * weight) * b;
    }
    for (int i = 0; i < 3; ++i) load[tri[i]] += area * local[i];
  }
  return load;
}

Vector weak_power_load(const StiffnessOperator& K, const ScalarField& field, double p) {
  return K.gather(weak_power_load_full(field, p));
}

Vector solve_spd(const StiffnessOperator& K, const Vector& load, double tol) {
  return solve_spd(K, load, Vector::Zero(K.size()), tol);
}

Vector solve_spd(const StiffnessOperator& K, const Vector& load, const Vector& guess, double tol) {
  if (load.size() != K.size() || guess.size() != K.size()) {
    throw Error(ErrorCode::InvalidInput, "load length differs from interior count");
  }
  if (load.squaredNorm() == 0.0) return Vector::Zero(K.size());
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(
      static_cast<Eigen::Index>(20.0 * std::sqrt(static_cast<double>(K.size())) + 1000.0));
  cg.compute(K.matrix);
  Vector x = cg.solveWithGuess(load, guess);
  if (cg.info() != Eigen::Success || !(cg.error() <= tol)) {
    throw Error(ErrorCode::CgStalled, "conjugate gradient did not reach the requested residual");
  }
  return x;
}

double boundary_flux(const ScalarField& field) {
  const auto& mesh = field.mesh();
  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  };
  std::unordered_map<std::uint64_t, std::size_t> owner;
  owner.reserve(mesh.boundary_edges().size());
  for (const auto& e : mesh.boundary_edges()) owner.emplace(key(e[0], e[1]), 0);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    for (int k = 0; k < 3; ++k) {
      if (auto it = owner.find(key(tri[k], tri[(k + 1) % 3])); it != owner.end()) it->second = t;
    }
  }
  double flux = 0.0;
  for (const auto& e : mesh.boundary_edges()) {
    const std::size_t t = owner.at(key(e[0], e[1]));
    const auto g = element_geometry(mesh, t);
    flux += element_gradient(mesh, field.values(), t, g).norm() *
            (mesh.vertex(e[0]) - mesh.vertex(e[1])).norm();
  }
  return flux;
}

}  // namespace sobolev
