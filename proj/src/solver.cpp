#include "sobolev/solver.hpp"

#include <limits>

#include "sobolev/error.hpp"

namespace sobolev {

void SolverConfig::validate() const {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponent, "p must be >= 1");
  if (!(quotient_tol > 0.0 && residual_tol > 0.0 && linear_tol > 0.0 && min_step > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "solver tolerances must be positive");
  }
  if (max_iterations < 1) throw Error(ErrorCode::InvalidInput, "max_iterations must be >= 1");
}

double el_residual(const StiffnessOperator& K, const ScalarField& phi, double lambda, double p) {
  const Vector x = K.gather(phi.values());
  const Vector Kx = K.matrix * x;
  const double scale = Kx.norm();
  if (scale == 0.0) return 0.0;
  return (Kx - lambda * weak_power_load(K, phi, p)).norm() / scale;
}

double el_residual(const ScalarField& phi, double lambda, double p) {
  return el_residual(assemble_stiffness(phi.mesh_ptr()), phi, lambda, p);
}

namespace {

struct Iterate {
  Vector x;          // interior values, int x^p = 1
  double quotient;   // = energy, by the normalisation
};

/// Clamps to the nonnegative cone and rescales to unit L^p norm.
Iterate normalized(const StiffnessOperator& K, Vector x, double p) {
  x = x.cwiseMax(0.0);
  const double norm_p = integrate_power(K.field(x), p);
  if (!(norm_p > 0.0)) throw Error(ErrorCode::InvalidInput, "iterate vanished");
  x /= std::pow(norm_p, 1.0 / p);
  const double energy = x.dot(K.matrix * x);
  const double mass = integrate_power(K.field(x), p);
  return {std::move(x), energy / std::pow(mass, 2.0 / p)};
}

}  // namespace

SolveResult minimize_quotient(std::shared_ptr<const TriMesh> mesh, const SolverConfig& config) {
  config.validate();
  const double p = config.p;
  const StiffnessOperator K = assemble_stiffness(mesh);

  // Discrete torsion function: exact minimiser at p = 1.
  const Vector torsion_load = weak_power_load(K, K.field(Vector::Zero(K.size())), 1.0);
  Iterate current = normalized(K, solve_spd(K, torsion_load, config.linear_tol), p);

  std::vector<double> history{current.quotient};
  double last_change = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  int iteration = 0;
  bool converged = false;

  while (true) {
    const ScalarField phi = K.field(current.x);
    const Vector load = weak_power_load(K, phi, p);
    const double lambda = current.quotient;  // energy / int phi^p with int phi^p = 1
    const Vector Kx = K.matrix * current.x;
    residual = (Kx - lambda * load).norm() / Kx.norm();
    if (last_change < config.quotient_tol && residual < config.residual_tol) {
      converged = true;
      break;
    }
    if (iteration >= config.max_iterations) break;
    ++iteration;

    const Vector w = solve_spd(K, load, current.x / lambda, config.linear_tol);
    const Iterate target = normalized(K, w, p);

    const double ceiling = current.quotient * (1.0 + kQuotientRoundoff);
    double step = 1.0;
    Iterate candidate = target;
    while (candidate.quotient > ceiling && step > config.min_step) {
      step *= 0.5;
      candidate = normalized(K, (1.0 - step) * current.x + step * target.x, p);
    }
    if (candidate.quotient > ceiling) {
      // No descent direction at the smallest step: the iterate is stationary to
      // rounding, so the residual test alone decides.
      converged = residual < config.residual_tol;
      break;
    }
    last_change = std::abs(current.quotient - candidate.quotient) / current.quotient;
    current = std::move(candidate);
    history.push_back(current.quotient);
  }

  SolveResult result{.p = p, .phi = K.field(current.x)};
  result.energy = dirichlet_energy(result.phi);
  result.p_norm_integral = integrate_power(result.phi, p);
  result.pminus1_integral = weak_power_load_full(result.phi, p).sum();
  result.cp = result.energy / std::pow(result.p_norm_integral, 2.0 / p);
  result.lambda = result.energy / result.p_norm_integral;
  result.iterations = iteration;
  result.residual = residual;
  result.h = mesh->h();
  result.converged = converged;
  result.quotient_history = std::move(history);
  return result;
}

}  // namespace sobolev
