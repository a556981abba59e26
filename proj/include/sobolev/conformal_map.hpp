#pragma once

#include <complex>
#include <variant>
#include <vector>

namespace sobolev {

using Complex = std::complex<double>;

/// f(z) = shift + sum_k coeffs[k-1] z^k.
struct PowerSeries {
  std::vector<Complex> coeffs;  // a_1 ... a_N
  Complex shift{0.0, 0.0};      // a_0
};

/// f(z) = (a z + b) / (c z + d), ad - bc != 0.
struct Moebius {
  Complex a, b, c, d;
};

/// f(z) = a z + b, a != 0.
struct Linear {
  Complex a, b;
};

/// An analytic map of the unit disk. Construct through the factories so the
/// variant invariants are checked once.
class ConformalMap {
 public:
  using Form = std::variant<PowerSeries, Moebius, Linear>;

  static ConformalMap power_series(std::vector<Complex> coeffs, Complex shift = {});
  static ConformalMap moebius(Complex a, Complex b, Complex c, Complex d);
  static ConformalMap linear(Complex a, Complex b = {});

  const Form& form() const noexcept { return form_; }
  bool is_linear() const noexcept;

 private:
  explicit ConformalMap(Form form) : form_(std::move(form)) {}
  Form form_;
};

/// Denominator magnitude below which a Moebius evaluation counts as a pole.
inline constexpr double kPoleTolerance = 1e-14;

Complex eval_map(const ConformalMap& map, Complex z);
Complex eval_derivative(const ConformalMap& map, Complex z);
Complex eval_second_derivative(const ConformalMap& map, Complex z);

/// Throws PoleHit when the map has a pole on the closed disk |z| <= radius.
void check_analytic_on_disk(const ConformalMap& map, double radius);

}  // namespace sobolev
