#pragma once

// A^p_alpha norm functionals.
//
// The exact norm is computed as |f(0)|^p + p^2 int_0^1 t A(t) V(t) dt, where
// A(t) is the circle mean of |f|^(p-2)|f'|^2 on |z| = t and
// V(t) = int_t^1 (1 - r^2)^(alpha-1) dr / r. This is the radial form with
// the Hardy-Stein derivative of the integral means, with the order of
// integration swapped, so only one radial quadrature is needed.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirlab/quad.hpp"
#include "dirlab/zoo.hpp"

namespace dirlab::norms {

struct SpaceParams {
  double alpha = 0.5;
  double p = 2.0;

  bool dirichlet_range() const { return alpha > 0.0 && alpha < 1.0; }
  /// Throws std::invalid_argument unless alpha > 0 and p > 0.
  void validate() const;
};

enum class Method { radial, area, coeff, rho, criterion };
std::string to_string(Method m);

struct NormEstimate {
  double value_p_power = 0.0;
  Method method = Method::radial;
  quad::QuadResult quad;
  std::optional<quad::DivergenceReport> divergence;

  /// Finiteness verdict: the truncation probe when present.
  quad::Verdict verdict() const;
};

struct NormOptions {
  double rel_tol = 1e-10;  // per shell
  double tail_tol = 1e-9;  // extrapolated tail stability
  int probe_radii = 12;
  int max_depth = 26;
  double max_ratio = 0.97;  // stop once shells decay slower than this
  long max_evaluations = 20'000'000;  // checked once the probe radii are done
  double poisson_radius = 0.9;  // edge inserted for the rho split
  ExecPolicy policy = default_policy();
};

/// Shell moments of A(t) and of the |f|^p means. Component order:
/// t A, t A V, t A log(1/t), 2 t A (1 - t^2)^alpha, 2 t W, 2 t W B
/// with W = (1 - t^2)^(alpha - 2) and B(t) the circle mean of |f|^p; the
/// last two are only filled on shells inside the Poisson radius.
inline constexpr std::size_t kMoments = 6;

struct DensityProfile {
  SpaceParams sp;
  double f0_p = 0.0;  // |f(0)|^p
  double poisson_radius = 0.9;
  int probe_radii = 12;
  std::vector<double> edges;
  std::vector<quad::Vec<kMoments>> shells;
  quad::Vec<kMoments> shell_error{};
  bool shells_converged = true;
  long evaluations = 0;
  quad::DiscHints hints;
  quad::SeriesState tail_v, tail_area, tail_l;

  /// Sum of component c over shells lying in [lo, hi] (lo, hi shell edges).
  double sum(std::size_t c, double lo, double hi) const;
};

/// Quadrature hints for f at exponent p (zeros matter only when p != 2).
quad::DiscHints hints_for(const zoo::TestFunction& f, double p);

/// Throws std::invalid_argument for p < 2 when the zeros of f are not known.
DensityProfile density_profile(const zoo::TestFunction& f, SpaceParams sp, const NormOptions& opt = {});

NormEstimate norm_radial(const zoo::TestFunction& f, SpaceParams sp, const NormOptions& opt = {});
NormEstimate norm_radial(const DensityProfile& prof);

/// int |f|^(p-2)|f'|^2 (1 - |z|^2)^alpha dA, without the |f(0)|^p term.
NormEstimate norm_area(const zoo::TestFunction& f, SpaceParams sp, const NormOptions& opt = {});
NormEstimate norm_area(const DensityProfile& prof);

/// sum |a_n|^2 Gamma(alpha) n! / Gamma(n + alpha): the exact squared A^2_alpha norm of a polynomial.
double norm_coeff_p2(std::span<const Complex> coefficients, double alpha);

/// Gamma(alpha) Gamma(np/2 + 1) / Gamma(np/2 + alpha) = ||e_n||^p.
double monomial_norm_p_power(int n, SpaceParams sp);

/// T_a f = (phi_a')^(alpha/p) (f o phi_a).
zoo::TestFunction apply_Ta(const zoo::TestFunction& f, Complex a, SpaceParams sp);

struct ConformalDefect {
  double I1 = 0.0;
  double I2 = 0.0;
  quad::QuadResult q1, q2;
};

/// I1 = int |f(phi_a)|^(p-2)|f'(phi_a)|^2 |phi_a'|^(alpha+2) (1-|z|^2)^alpha dA,
/// I2 = int |f(phi_a)|^p |phi_a'|^(alpha-2) |phi_a''|^2 (1-|z|^2)^alpha dA.
ConformalDefect conformal_defect(const zoo::TestFunction& f, Complex a, SpaceParams sp, double rel_tol = 1e-9);

struct EmbeddingCheck {
  double lhs = 0.0;  // ||f||_{beta,q}
  double rhs = 0.0;  // ||f||_{alpha,p}
  bool contractive = false;
  NormEstimate from_estimate, to_estimate;
};

/// Requires from.p < to.p and from.alpha/from.p = to.alpha/to.p.
EmbeddingCheck embedding_check(const zoo::TestFunction& f, SpaceParams from, SpaceParams to, double tol = 1e-6);

}  // namespace dirlab::norms
