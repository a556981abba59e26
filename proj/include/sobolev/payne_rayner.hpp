#pragma once

#include "sobolev/solver.hpp"

namespace sobolev {

/// Reverse Hoelder inequality (int phi^(p-1))^2 >= 8 pi / (p C_p) (int phi^p)^(2 - 2/p)
/// and its conformal-metric form L^2 >= (8 pi / p) A, evaluated on a discrete extremal.
struct PayneRaynerReport {
  double p = 0.0;
  double cp = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;
  double relative_deficit = 0.0;    // deficit / rhs
  double length_flux = 0.0;         // int_{dD} |grad phi| ds
  double length_multiplier = 0.0;   // Lambda int phi^(p-1)
  double conformal_area = 0.0;      // int |grad phi|^2
  double iso_lhs = 0.0;             // length_multiplier^2
  double iso_rhs = 0.0;             // (8 pi / p) conformal_area
  bool equality_flag = false;       // relative_deficit < kEqualityTolerance
  bool inequality_holds = false;    // deficit >= -kDeficitTolerance * rhs
};

inline constexpr double kEqualityTolerance = 0.02;
inline constexpr double kDeficitTolerance = 0.02;

PayneRaynerReport payne_rayner_report(const SolveResult& result);

/// p = 1 case: 2 pi P <= A^2 with P = 4 / C_1.
struct SaintVenantRecord {
  double area_squared = 0.0;
  double two_pi_rigidity = 0.0;
  double torsional_rigidity = 0.0;
  double ratio = 0.0;  // two_pi_rigidity / area_squared, <= 1
};

/// Throws WrongExponent unless result.p == 1.
SaintVenantRecord saint_venant_check(const SolveResult& result, double mesh_area);

}  // namespace sobolev
