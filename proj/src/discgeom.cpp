#include "dirlab/discgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dirlab::discgeom {

Complex mobius(Complex a, Complex z) { return (a - z) / (1.0 - std::conj(a) * z); }

MobiusDerivs mobius_derivs(Complex a, Complex z) {
  const double k = 1.0 - std::norm(a);
  const Complex d = 1.0 - std::conj(a) * z;
  const Complex d2 = d * d;
  return {-k / d2, -2.0 * std::conj(a) * k / (d2 * d)};
}

Complex deriv_power(Complex a, Complex z, double s) {
  const double k = 1.0 - std::norm(a);
  const Complex log_d = std::log(1.0 - std::conj(a) * z);
  // Modulus and phase are assembled separately so the modulus is exact.
  const double modulus = std::pow(k, s) * std::exp(-2.0 * s * log_d.real());
  const double phase = std::numbers::pi * s - 2.0 * s * log_d.imag();
  return std::polar(modulus, phase);
}

double relative_angle(Complex z, Complex w) {
  if (z == 0.0 || w == 0.0) return 0.0;
  return std::arg(z * std::conj(w));
}

double box_inner_radius(const BoxSpec& box, bool stretched) {
  const double kappa = stretched ? 2.0 : 1.0;
  return std::max(0.0, 1.0 - kappa * (1.0 - std::abs(box.anchor)));
}

bool box_is_annulus(const BoxSpec& box) { return 1.0 - std::abs(box.anchor) >= 0.5; }

bool box_contains(const BoxSpec& box, Complex z, bool stretched) {
  const double kappa = stretched ? 2.0 : 1.0;
  const double depth = 1.0 - std::abs(box.anchor);
  if (1.0 - std::abs(z) > kappa * depth) return false;
  return std::abs(relative_angle(z, box.anchor)) / (2.0 * std::numbers::pi) < depth;
}

double max_estimate(Complex a, Complex z) {
  return std::max({1.0 - std::abs(a), 1.0 - std::abs(z), std::abs(relative_angle(z, a))});
}

}  // namespace dirlab::discgeom
