#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sobolev/mesh.hpp"

namespace sobolev {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Nodal P1 values on a mesh. The mesh is shared so results can outlive the
/// code that built them.
class ScalarField {
 public:
  ScalarField(std::shared_ptr<const TriMesh> mesh, Vector values);

  template <class F>
  static ScalarField interpolate(std::shared_ptr<const TriMesh> mesh, F&& f) {
    Vector values(static_cast<Eigen::Index>(mesh->num_vertices()));
    for (std::size_t v = 0; v < mesh->num_vertices(); ++v) {
      values[static_cast<Eigen::Index>(v)] = f(mesh->vertices()[v]);
    }
    return ScalarField(std::move(mesh), std::move(values));
  }

  const TriMesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const TriMesh>& mesh_ptr() const noexcept { return mesh_; }
  const Vector& values() const noexcept { return values_; }
  bool zero_on_boundary() const noexcept { return zero_on_boundary_; }

  ScalarField scaled(double c) const { return ScalarField(mesh_, c * values_); }

 private:
  std::shared_ptr<const TriMesh> mesh_;
  Vector values_;
  bool zero_on_boundary_ = false;
};

/// Barycentric points and weights on the reference triangle; weights sum to 1.
struct QuadratureRule {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Symmetric 6-point rule exact for polynomials of degree 4.
const QuadratureRule& degree4_rule();

/// Constant gradients of the three barycentric basis functions on triangle t.
struct ElementGeometry {
  double area;
  std::array<Eigen::Vector2d, 3> grad;
};
ElementGeometry element_geometry(const TriMesh& mesh, std::size_t t);

/// P1 stiffness over interior vertices (Dirichlet by elimination).
struct StiffnessOperator {
  std::shared_ptr<const TriMesh> mesh;
  SparseMatrix matrix;
  std::vector<int> interior_to_global;
  std::vector<int> global_to_interior;  // -1 on boundary vertices

  Eigen::Index size() const noexcept { return matrix.rows(); }
  Vector gather(const Vector& full) const;
  Vector scatter(const Vector& interior) const;
  ScalarField field(const Vector& interior) const { return ScalarField(mesh, scatter(interior)); }
};

StiffnessOperator assemble_stiffness(std::shared_ptr<const TriMesh> mesh);

/// Unconstrained stiffness over all vertices.
SparseMatrix assemble_full_stiffness(const TriMesh& mesh);

double dirichlet_energy(const ScalarField& field);

/// Integral of max(u,0)^p with the degree-4 rule. Throws InvalidExponent for p < 1.
double integrate_power(const ScalarField& field, double p);

/// Entries int max(u,0)^(p-1) lambda_i over every vertex basis function; for p = 1
/// the integrand is 1.
Vector weak_power_load_full(const ScalarField& field, double p);

/// weak_power_load_full restricted to the interior vertices of K.
Vector weak_power_load(const StiffnessOperator& K, const ScalarField& field, double p);

/// Conjugate gradient with Jacobi preconditioning. Throws CgStalled when the relative
/// residual misses tol within 20 sqrt(n) + 1000 iterations.
Vector solve_spd(const StiffnessOperator& K, const Vector& load, double tol = 1e-10);
Vector solve_spd(const StiffnessOperator& K, const Vector& load, const Vector& guess, double tol);

/// Sum over boundary edges of |grad u_T| * edge length.
double boundary_flux(const ScalarField& field);

}  // namespace sobolev
