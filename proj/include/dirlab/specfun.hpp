#pragma once

// Real special functions behind the closed forms: Gamma, log-Gamma, Beta,
// generalized binomials, the coefficients c_alpha(n), and the radial
// weight tails used by the norm functionals.

namespace dirlab::specfun {

/// Gamma function. Throws std::domain_error at poles (0, -1, -2, ...) and
/// std::overflow_error when the result is not representable.
double gamma(double x);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// Euler Beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), x, y > 0.
double beta(double x, double y);

/// s (s - 1) ... (s - j + 1) / j!, by iterated product (keeps the sign pattern).
double gen_binomial(double s, unsigned j);

/// c_alpha(n) = Gamma(n + alpha) / (Gamma(alpha) n!).
double besov_coeff(double alpha, unsigned n);

/// V(t) = int_t^1 (1 - r^2)^(alpha - 1) dr / r, for 0 < t <= 1, alpha > 0.
/// `one_minus_t` should carry 1 - t exactly when t is close to 1.
double radial_tail_weight(double alpha, double t, double one_minus_t);
inline double radial_tail_weight(double alpha, double t) {
  return radial_tail_weight(alpha, t, 1.0 - t);
}

}  // namespace dirlab::specfun
