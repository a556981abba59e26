#include "sobolev/payne_rayner.hpp"

#include <cmath>
#include <numbers>

#include "sobolev/error.hpp"

namespace sobolev {

PayneRaynerReport payne_rayner_report(const SolveResult& result) {
  const double p = result.p;
  const double eight_pi = 8.0 * std::numbers::pi;
  PayneRaynerReport report;
  report.p = p;
  report.cp = result.cp;
  report.lhs = result.pminus1_integral * result.pminus1_integral;
  report.rhs = eight_pi / (p * result.cp) * std::pow(result.p_norm_integral, 2.0 - 2.0 / p);
  report.deficit = report.lhs - report.rhs;
  report.relative_deficit = report.deficit / report.rhs;
  report.length_flux = boundary_flux(result.phi);
  report.length_multiplier = result.lambda * result.pminus1_integral;
  report.conformal_area = result.energy;
  report.iso_lhs = report.length_multiplier * report.length_multiplier;
  report.iso_rhs = eight_pi / p * report.conformal_area;
  report.equality_flag = report.relative_deficit < kEqualityTolerance;
  report.inequality_holds = report.deficit >= -kDeficitTolerance * report.rhs;
  return report;
}

SaintVenantRecord saint_venant_check(const SolveResult& result, double mesh_area) {
  if (result.p != 1.0) throw Error(ErrorCode::WrongExponent, "Saint-Venant check needs p = 1");
  SaintVenantRecord record;
  record.torsional_rigidity = 4.0 / result.cp;
  record.area_squared = mesh_area * mesh_area;
  record.two_pi_rigidity = 2.0 * std::numbers::pi * record.torsional_rigidity;
  record.ratio = record.two_pi_rigidity / record.area_squared;
  return record;
}

}  // namespace sobolev
