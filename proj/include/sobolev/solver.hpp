#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "sobolev/fem.hpp"

namespace sobolev {

/// Quotient evaluations near a minimiser agree only to rounding; an accepted step may
/// raise the quotient by at most this relative amount.
inline constexpr double kQuotientRoundoff = 1e-13;

struct SolverConfig {
  double p = 2.0;
  double quotient_tol = 1e-10;    // relative change of the Rayleigh quotient
  double residual_tol = 1e-7;     // relative discrete Euler-Lagrange residual
  int max_iterations = 500;
  double min_step = std::ldexp(1.0, -20);
  double linear_tol = 1e-11;

  void validate() const;
};

/// Discrete minimiser of |grad u|^2 / (int u^p)^(2/p). phi is normalised so that
/// int phi^p = 1 up to rounding; cp and lambda are recomputed from the stored field.
struct SolveResult {
  double p = 0.0;
  double cp = 0.0;
  double lambda = 0.0;
  ScalarField phi;
  double energy = 0.0;
  double p_norm_integral = 0.0;
  double pminus1_integral = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double h = 0.0;
  bool converged = false;
  std::vector<double> quotient_history{};  // one entry per accepted iterate
};

/// Damped fixed-point iteration on the Euler-Lagrange equation K phi = Lambda b(phi^(p-1))
/// with a non-increasing quotient line search. Reaching max_iterations is not an
/// error: the best iterate is returned with converged = false.
SolveResult minimize_quotient(std::shared_ptr<const TriMesh> mesh, const SolverConfig& config);

/// S_p = C_p^(-1/2).
inline double sobolev_constant(double cp) { return 1.0 / std::sqrt(cp); }
inline double sobolev_constant(const SolveResult& result) { return sobolev_constant(result.cp); }

/// |K phi - lambda b(phi^(p-1))| / |K phi| over interior vertices.
double el_residual(const ScalarField& phi, double lambda, double p);
double el_residual(const StiffnessOperator& K, const ScalarField& phi, double lambda, double p);

}  // namespace sobolev
