#pragma once

#include <complex>
#include <numbers>

namespace dirlab {

using Complex = std::complex<double>;

namespace discgeom {

/// phi_a(z) = (a - z) / (1 - conj(a) z). An involution of the disc.
Complex mobius(Complex a, Complex z);

struct MobiusDerivs {
  Complex first;
  Complex second;
};

/// phi_a'(z) = -(1 - |a|^2)/(1 - conj(a) z)^2 and phi_a''(z) = -2 conj(a) (1 - |a|^2)/(1 - conj(a) z)^3.
MobiusDerivs mobius_derivs(Complex a, Complex z);

/// (phi_a'(z))^s on the branch (1 - |a|^2)^s e^{i pi s} (1 - conj(a) z)^{-2s}.
Complex deriv_power(Complex a, Complex z, double s);

/// Principal argument of z * conj(w), in (-pi, pi].
double relative_angle(Complex z, Complex w);

/// Carleson box anchored at `anchor`: S_w, or the stretched box when
/// `stretched` is set (radial depth doubled).
struct BoxSpec {
  Complex anchor;
};

/// Angular half-width of S_w measured in radians: 2 pi (1 - |w|).
inline double box_half_angle(const BoxSpec& box) { return 2.0 * std::numbers::pi * (1.0 - std::abs(box.anchor)); }

/// Inner radius of S_w (kappa = 1) or the stretched box (kappa = 2), clamped at 0.
double box_inner_radius(const BoxSpec& box, bool stretched);

/// True once the angular condition covers the full circle (1 - |w| >= 1/2).
bool box_is_annulus(const BoxSpec& box);

bool box_contains(const BoxSpec& box, Complex z, bool stretched);

/// max{1 - |a|, 1 - |z|, |arg(conj(a) z)|}, comparable to |1 - conj(a) z|.
double max_estimate(Complex a, Complex z);

}  // namespace discgeom
}  // namespace dirlab
