#include "sobolev/reference.hpp"

#include <cmath>
#include <numbers>

namespace sobolev {

double bessel_j0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

double bessel_j0_first_zero() {
  double lo = 2.0, hi = 3.0;  // J_0(2) > 0 > J_0(3)
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double unit_square_torsional_rigidity() {
  // P = 1/3 - (64/pi^5) sum_{n odd} tanh(n pi / 2) / n^5 for a square of side 1.
  double sum = 0.0;
  for (int n = 1; n < 4001; n += 2) {
    sum += std::tanh(n * std::numbers::pi / 2.0) / std::pow(static_cast<double>(n), 5);
  }
  return 1.0 / 3.0 - 64.0 / std::pow(std::numbers::pi, 5) * sum;
}

std::optional<double> reference_value(DomainKind kind, double p) {
  static const double disk_eigenvalue = std::pow(bessel_j0_first_zero(), 2);
  static const double square_torsion = unit_square_torsional_rigidity();
  if (p == 2.0) {
    if (kind == DomainKind::UnitDisk) return disk_eigenvalue;
    if (kind == DomainKind::UnitSquare) return 2.0 * std::numbers::pi * std::numbers::pi;
  }
  if (p == 1.0) {
    // C_1 = 4 / P; the disk torsion function (1 - r^2)/2 gives P = pi / 2.
    if (kind == DomainKind::UnitDisk) return 4.0 / (std::numbers::pi / 2.0);
    if (kind == DomainKind::UnitSquare) return 4.0 / square_torsion;
  }
  return std::nullopt;
}

}  // namespace sobolev
