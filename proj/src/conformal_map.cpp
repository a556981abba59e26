#include "sobolev/conformal_map.hpp"

#include <cmath>

#include "sobolev/error.hpp"

namespace sobolev {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Complex moebius_denominator(const Moebius& m, Complex z) {
  const Complex den = m.c * z + m.d;
  if (std::abs(den) < kPoleTolerance) {
    throw Error(ErrorCode::PoleHit, "Moebius denominator vanishes");
  }
  return den;
}

}  // namespace

ConformalMap ConformalMap::power_series(std::vector<Complex> coeffs, Complex shift) {
  bool nonzero = false;
  for (const auto& a : coeffs) nonzero = nonzero || a != Complex{};
  if (!nonzero) {
    throw Error(ErrorCode::InvalidInput, "power series needs a nonzero coefficient a_k, k >= 1");
  }
  return ConformalMap(PowerSeries{std::move(coeffs), shift});
}

ConformalMap ConformalMap::moebius(Complex a, Complex b, Complex c, Complex d) {
  if (a * d - b * c == Complex{}) {
    throw Error(ErrorCode::InvalidInput, "Moebius determinant ad - bc is zero");
  }
  return ConformalMap(Moebius{a, b, c, d});
}

ConformalMap ConformalMap::linear(Complex a, Complex b) {
  if (a == Complex{}) throw Error(ErrorCode::InvalidInput, "linear slope must be nonzero");
  return ConformalMap(Linear{a, b});
}

bool ConformalMap::is_linear() const noexcept {
  return std::visit(
      overloaded{
          [](const Linear&) { return true; },
          [](const Moebius& m) { return m.c == Complex{}; },
          [](const PowerSeries& s) {
            for (std::size_t k = 1; k < s.coeffs.size(); ++k) {
              if (s.coeffs[k] != Complex{}) return false;
            }
            return true;
          },
      },
      form_);
}

Complex eval_map(const ConformalMap& map, Complex z) {
  return std::visit(
      overloaded{
          [z](const Linear& l) { return l.a * z + l.b; },
          [z](const Moebius& m) { return (m.a * z + m.b) / moebius_denominator(m, z); },
          [z](const PowerSeries& s) {
            Complex acc{};
            for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) acc = (acc + *it) * z;
            return acc + s.shift;
          },
      },
      map.form());
}

Complex eval_derivative(const ConformalMap& map, Complex z) {
  return std::visit(
      overloaded{
          [](const Linear& l) { return l.a; },
          [z](const Moebius& m) {
            const Complex den = moebius_denominator(m, z);
            return (m.a * m.d - m.b * m.c) / (den * den);
          },
          [z](const PowerSeries& s) {
            Complex acc{};
            for (std::size_t k = s.coeffs.size(); k >= 1; --k) {
              acc = acc * z + static_cast<double>(k) * s.coeffs[k - 1];
            }
            return acc;
          },
      },
      map.form());
}

Complex eval_second_derivative(const ConformalMap& map, Complex z) {
  return std::visit(
      overloaded{
          [](const Linear&) { return Complex{}; },
          [z](const Moebius& m) {
            const Complex den = moebius_denominator(m, z);
            return -2.0 * m.c * (m.a * m.d - m.b * m.c) / (den * den * den);
          },
          [z](const PowerSeries& s) {
            Complex acc{};
            for (std::size_t k = s.coeffs.size(); k >= 2; --k) {
              acc = acc * z + static_cast<double>(k * (k - 1)) * s.coeffs[k - 1];
            }
            return acc;
          },
      },
      map.form());
}

void check_analytic_on_disk(const ConformalMap& map, double radius) {
  if (const auto* m = std::get_if<Moebius>(&map.form()); m && m->c != Complex{}) {
    if (std::abs(-m->d / m->c) <= radius) {
      throw Error(ErrorCode::PoleHit, "Moebius pole lies on the closed disk |z| <= r");
    }
  }
}

}  // namespace sobolev
