#include "dirlab/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "dirlab/specfun.hpp"

namespace dirlab::norms {

using quad::Vec;

void SpaceParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("SpaceParams: alpha must be positive");
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("SpaceParams: p must be positive");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::radial:
      return "radial";
    case Method::area:
      return "area";
    case Method::coeff:
      return "coeff";
    case Method::rho:
      return "rho";
    case Method::criterion:
      return "criterion";
  }
  return "radial";
}

quad::Verdict NormEstimate::verdict() const {
  if (divergence) return divergence->verdict;
  return quad.converged ? quad::Verdict::converged : quad::Verdict::inconclusive;
}

double DensityProfile::sum(std::size_t c, double lo, double hi) const {
  double s = 0.0;
  for (std::size_t i = 0; i < shells.size(); ++i)
    if (edges[i] >= lo && edges[i + 1] <= hi) s += shells[i][c];
  return s;
}

quad::DiscHints hints_for(const zoo::TestFunction& f, double p) {
  quad::DiscHints h;
  if (p != 2.0) h.interior = f.known_zeros();
  h.boundary_angles = f.singular_angles();
  return h;
}

namespace {

// Dyadic index k of an edge 1 - 2^-k, or 0 if the edge is not dyadic.
int dyadic_index(double r) {
  if (r <= 0.0) return 0;
  const double k = -std::log2(1.0 - r);
  const double kr = std::round(k);
  return (kr >= 1.0 && quad::dyadic_radius(static_cast<int>(kr)) == r) ? static_cast<int>(kr) : 0;
}

std::vector<double> component(const DensityProfile& prof, std::size_t c) {
  std::vector<double> v;
  v.reserve(prof.shells.size());
  for (const auto& s : prof.shells) v.push_back(s[c]);
  return v;
}

bool stable(const quad::SeriesState& st, double tol) {
  return st.decaying && st.change <= tol * std::abs(st.extrapolated);
}

}  // namespace

DensityProfile density_profile(const zoo::TestFunction& f, SpaceParams sp, const NormOptions& opt) {
  sp.validate();
  if (sp.p < 2.0 && !f.zeros_known())
    throw std::invalid_argument("density_profile: p < 2 needs the zeros of " + f.label());
  DensityProfile prof;
  prof.sp = sp;
  prof.poisson_radius = opt.poisson_radius;
  prof.probe_radii = opt.probe_radii;
  prof.f0_p = f.abs_pow(0.0, sp.p);
  prof.hints = hints_for(f, sp.p);
  const double extra[1] = {opt.poisson_radius};
  const auto edges = quad::dyadic_edges(std::max(opt.max_depth, opt.probe_radii + 1), extra);

  quad::DiscOptions dopt;
  dopt.radial_tol = {opt.rel_tol, 1e-300};
  dopt.angular.tol = {opt.rel_tol, 1e-300};
  dopt.policy = opt.policy;
  const double p = sp.p;
  const double alpha = sp.alpha;
  auto sampler = [&f, p](Complex z) {
    const auto v = f.density_and_abs_pow(z, p);
    return Vec<2>{v[0], v[1]};
  };

  prof.edges.push_back(edges.front());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double r0 = edges[i];
    const double r1 = edges[i + 1];
    const bool inside = r1 <= opt.poisson_radius;
    auto moments = [alpha, inside](double t, double omt, const Vec<2>& m) {
      const double tA = t * m[0];
      const double V = specfun::radial_tail_weight(alpha, t, omt);
      const double L = -std::log1p(-omt);
      const double one_minus_t2 = omt * (1.0 + t);
      Vec<kMoments> out{tA, tA * V, tA * L, 2.0 * tA * std::pow(one_minus_t2, alpha), 0.0, 0.0};
      if (inside) {
        const double w2 = 2.0 * t * std::pow(one_minus_t2, alpha - 2.0);
        out[4] = w2;
        out[5] = w2 * m[1];
      }
      return out;
    };
    dopt.max_evaluations = std::max(opt.max_evaluations - prof.evaluations, 1L);
    const auto sh = quad::integrate_shell<2, kMoments>(sampler, moments, r0, r1, prof.hints, dopt);
    prof.shells.push_back(sh.value);
    prof.edges.push_back(r1);
    for (std::size_t c = 0; c < kMoments; ++c) prof.shell_error[c] += sh.error[c];
    prof.evaluations += sh.evaluations;
    prof.shells_converged = prof.shells_converged && sh.converged;

    const int k = dyadic_index(r1);
    if (k < opt.probe_radii + 1) continue;
    prof.tail_v = quad::series_state(component(prof, 1));
    prof.tail_l = quad::series_state(component(prof, 2));
    prof.tail_area = quad::series_state(component(prof, 3));
    if (stable(prof.tail_v, opt.tail_tol) && stable(prof.tail_area, opt.tail_tol)) break;
    if (!prof.tail_v.decaying || prof.tail_v.ratio >= opt.max_ratio) break;
    if (prof.evaluations >= opt.max_evaluations) break;
  }
  return prof;
}

NormEstimate norm_radial(const DensityProfile& prof) {
  const double p2 = prof.sp.p * prof.sp.p;
  NormEstimate est;
  est.method = Method::radial;
  est.value_p_power = prof.f0_p + p2 * prof.tail_v.extrapolated;
  est.quad.value = est.value_p_power;
  est.quad.abs_error_estimate = p2 * (prof.shell_error[1] + prof.tail_v.change);
  est.quad.evaluations = prof.evaluations;
  est.quad.converged = prof.shells_converged && stable(prof.tail_v, 1e-6);

  // Truncations int_0^R M'(r) (1 - r^2)^(alpha - 1) dr = p^2 (S_V(R) - V(R) S_0(R)).
  std::vector<double> radii, values;
  double s0 = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < prof.shells.size(); ++i) {
    s0 += prof.shells[i][0];
    sv += prof.shells[i][1];
    const double r = prof.edges[i + 1];
    const int k = dyadic_index(r);
    if (k >= 2 && k <= prof.probe_radii + 1) {
      const double V = specfun::radial_tail_weight(prof.sp.alpha, r, std::ldexp(1.0, -k));
      radii.push_back(r);
      values.push_back(prof.f0_p + p2 * (sv - V * s0));
    }
  }
  est.divergence = quad::classify_truncations(std::move(radii), std::move(values));
  return est;
}

NormEstimate norm_radial(const zoo::TestFunction& f, SpaceParams sp, const NormOptions& opt) {
  return norm_radial(density_profile(f, sp, opt));
}

NormEstimate norm_area(const DensityProfile& prof) {
  NormEstimate est;
  est.method = Method::area;
  est.value_p_power = prof.tail_area.extrapolated;
  est.quad.value = est.value_p_power;
  est.quad.abs_error_estimate = prof.shell_error[3] + prof.tail_area.change;
  est.quad.evaluations = prof.evaluations;
  est.quad.converged = prof.shells_converged && stable(prof.tail_area, 1e-6);
  std::vector<double> radii, values;
  double s = 0.0;
  for (std::size_t i = 0; i < prof.shells.size(); ++i) {
    s += prof.shells[i][3];
    const int k = dyadic_index(prof.edges[i + 1]);
    if (k >= 2 && k <= prof.probe_radii + 1) {
      radii.push_back(prof.edges[i + 1]);
      values.push_back(s);
    }
  }
  est.divergence = quad::classify_truncations(std::move(radii), std::move(values));
  return est;
}

NormEstimate norm_area(const zoo::TestFunction& f, SpaceParams sp, const NormOptions& opt) {
  return norm_area(density_profile(f, sp, opt));
}

double norm_coeff_p2(std::span<const Complex> coefficients, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("norm_coeff_p2: alpha must be positive");
  double s = 0.0;
  const double lg_alpha = specfun::log_gamma(alpha);
  for (std::size_t n = 0; n < coefficients.size(); ++n) {
    const double a2 = std::norm(coefficients[n]);
    if (a2 == 0.0) continue;
    const double dn = static_cast<double>(n);
    const double w = n == 0 ? 1.0 : std::exp(lg_alpha + specfun::log_gamma(dn + 1.0) - specfun::log_gamma(dn + alpha));
    s += a2 * w;
  }
  return s;
}

double monomial_norm_p_power(int n, SpaceParams sp) {
  sp.validate();
  if (n < 0) throw std::invalid_argument("monomial_norm_p_power: n must be nonnegative");
  if (n == 0) return 1.0;
  const double x = n * sp.p / 2.0;
  return std::exp(specfun::log_gamma(sp.alpha) + specfun::log_gamma(x + 1.0) - specfun::log_gamma(x + sp.alpha));
}

zoo::TestFunction apply_Ta(const zoo::TestFunction& f, Complex a, SpaceParams sp) {
  sp.validate();
  return zoo::compose_conformal(f, a, sp.alpha / sp.p);
}

ConformalDefect conformal_defect(const zoo::TestFunction& f, Complex a, SpaceParams sp, double rel_tol) {
  sp.validate();
  if (!(std::abs(a) < 1.0)) throw std::invalid_argument("conformal_defect: need |a| < 1");
  if (sp.p < 2.0 && !f.zeros_known())
    throw std::invalid_argument("conformal_defect: p < 2 needs the zeros of " + f.label());
  const double p = sp.p;
  const double alpha = sp.alpha;
  quad::DiscHints hints;
  if (p != 2.0)
    for (const auto& z : f.known_zeros()) hints.interior.push_back(discgeom::mobius(a, z));
  for (double t : f.singular_angles()) hints.boundary_angles.push_back(std::arg(discgeom::mobius(a, std::polar(1.0, t))));
  if (std::abs(a) > 0.0) hints.boundary_angles.push_back(std::arg(a));

  auto F1 = [&](Complex z) {
    const auto d = discgeom::mobius_derivs(a, z);
    const double w = std::pow(1.0 - std::norm(z), alpha);
    return f.density(discgeom::mobius(a, z), p) * std::pow(std::abs(d.first), alpha + 2.0) * w;
  };
  auto F2 = [&](Complex z) {
    const auto d = discgeom::mobius_derivs(a, z);
    if (d.second == 0.0) return 0.0;
    const double w = std::pow(1.0 - std::norm(z), alpha);
    return f.abs_pow(discgeom::mobius(a, z), p) * std::pow(std::abs(d.first), alpha - 2.0) * std::norm(d.second) * w;
  };
  ConformalDefect out;
  out.q1 = quad::integrate_disc(F1, 0.0, {rel_tol, 1e-300}, hints);
  out.q2 = quad::integrate_disc(F2, 0.0, {rel_tol, 1e-300}, hints);
  out.I1 = out.q1.value;
  out.I2 = out.q2.value;
  return out;
}

EmbeddingCheck embedding_check(const zoo::TestFunction& f, SpaceParams from, SpaceParams to, double tol) {
  from.validate();
  to.validate();
  if (!(from.p < to.p)) throw std::invalid_argument("embedding_check: need from.p < to.p");
  const double r1 = from.alpha / from.p;
  const double r2 = to.alpha / to.p;
  if (std::abs(r1 - r2) > 1e-12 * std::max(r1, r2))
    throw std::invalid_argument("embedding_check: need from.alpha/from.p == to.alpha/to.p");
  EmbeddingCheck out;
  out.from_estimate = norm_radial(f, from);
  out.to_estimate = norm_radial(f, to);
  out.rhs = std::pow(out.from_estimate.value_p_power, 1.0 / from.p);
  out.lhs = std::pow(out.to_estimate.value_p_power, 1.0 / to.p);
  out.contractive = out.lhs <= out.rhs * (1.0 + tol);
  return out;
}

}  // namespace dirlab::norms
