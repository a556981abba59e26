#pragma once

#include <optional>

#include "sobolev/domain.hpp"

namespace sobolev {

/// J_0 from its power series; accurate for |x| <= 10.
double bessel_j0(double x);

/// First positive zero of J_0, by bisection on the series.
double bessel_j0_first_zero();

/// Torsional rigidity P = 2 int v, -Laplace v = 2, of the unit square (tanh series).
double unit_square_torsional_rigidity();

/// Closed-form C_p where one is catalogued: unit disk and unit square at p = 1, 2.
std::optional<double> reference_value(DomainKind kind, double p);

}  // namespace sobolev
