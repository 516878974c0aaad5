#include "dirlab/potential.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "dirlab/specfun.hpp"

namespace dirlab::potential {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

// (1/2 pi) int_0^{2 pi} g. Pieces run between consecutive singular angles
// (both ends graded); peaks get extra breakpoints at the given widths.
struct Peak {
  double t;
  double width;
};

quad::QuadResult circle_mean_adaptive(const std::function<double(double)>& g, std::vector<double> singular,
                                      const std::vector<Peak>& peaks, double rel_tol) {
  for (auto& s : singular) s = wrap_2pi(s);
  std::sort(singular.begin(), singular.end());
  singular.erase(std::unique(singular.begin(), singular.end()), singular.end());
  const double start = singular.empty() ? 0.0 : singular.front();

  struct Cut {
    double x;
    bool singular;
  };
  std::vector<Cut> cuts;
  for (double s : singular) cuts.push_back({s, true});
  cuts.push_back({start + kTwoPi, !singular.empty()});
  if (singular.empty()) cuts.push_back({start, false});
  for (const auto& pk : peaks) {
    const double c = start + wrap_2pi(pk.t - start);
    for (double m : {0.0, -8.0, -1.0, 1.0, 8.0}) {
      const double x = c + m * pk.width;
      if (x > start && x < start + kTwoPi) cuts.push_back({x, false});
    }
  }
  std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.x < b.x; });

  quad::QuadResult out;
  out.converged = true;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i].x, hi = cuts[i + 1].x;
    if (!(hi - lo > 1e-15)) continue;
    const auto r = quad::integrate_interval(g, lo, hi, {rel_tol, 1e-300}, {cuts[i].singular, cuts[i + 1].singular});
    out.value += r.value;
    out.abs_error_estimate += r.abs_error_estimate;
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
  }
  out.value /= kTwoPi;
  out.abs_error_estimate /= kTwoPi;
  return out;
}

double trapezoid_poisson(const std::vector<double>& s, std::size_t stride, Complex z) {
  const std::size_t n = s.size() / stride;
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += s[j * stride] * poisson_kernel(z, kTwoPi * static_cast<double>(j) / n);
  return sum / static_cast<double>(n);
}

long required_nodes(double one_minus_r, int per_width) {
  const double need = per_width * kTwoPi / one_minus_r;
  if (!(need < 1e18)) return -1;
  return static_cast<long>(std::bit_ceil(static_cast<unsigned long>(std::ceil(need))));
}

bool stable(const quad::SeriesState& st, double tol) {
  return st.decaying && st.change <= tol * std::abs(st.extrapolated);
}

}  // namespace

BoundaryData::BoundaryData(std::vector<double> samples, std::function<double(double)> source)
    : samples_(std::move(samples)), source_(std::move(source)) {}

BoundaryData BoundaryData::from_samples(std::vector<double> samples) {
  const auto n = samples.size();
  if (n < 64 || !std::has_single_bit(n))
    throw std::invalid_argument("BoundaryData: resolution must be a power of two, at least 64");
  for (double v : samples)
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("BoundaryData: samples must be finite and >= 0");
  return BoundaryData(std::move(samples), {});
}

BoundaryData BoundaryData::from_function(std::function<double(double)> g, int resolution) {
  if (!g) throw std::invalid_argument("BoundaryData: empty function");
  const auto n = static_cast<std::size_t>(std::max(resolution, 0));
  if (n < 64 || !std::has_single_bit(n))
    throw std::invalid_argument("BoundaryData: resolution must be a power of two, at least 64");
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = g(kTwoPi * static_cast<double>(j) / n);
  auto data = from_samples(std::move(s));
  data.source_ = std::move(g);
  return data;
}

BoundaryData BoundaryData::refined() const {
  if (!source_) throw std::logic_error("BoundaryData: sampled data cannot be refined");
  const std::size_t n = samples_.size();
  std::vector<double> s(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    s[2 * j] = samples_[j];
    s[2 * j + 1] = source_(kTwoPi * (j + 0.5) / n);
  }
  for (double v : s)
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("BoundaryData: samples must be finite and >= 0");
  return BoundaryData(std::move(s), source_);
}

double BoundaryData::mean() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s / static_cast<double>(samples_.size());
}

double poisson_kernel(Complex z, double t) {
  const double r2 = std::norm(z);
  return (1.0 - r2) / std::norm(z - std::polar(1.0, t));
}

double poisson_extension(const BoundaryData& g, Complex z, const PoissonOptions& opt) {
  const double r = std::abs(z);
  if (!(r < 1.0)) throw std::invalid_argument("poisson_extension: need |z| < 1");
  long resolved_at = required_nodes(1.0 - r, opt.nodes_per_width);
  // The kernel's Fourier coefficients are r^|k|, so N nodes alias at about 2 r^N sup g.
  long aliasing_free = 64;
  if (r > 0.0)
    while (aliasing_free * std::log(r) > std::log(opt.tol / 3.0) && aliasing_free < (1L << 40)) aliasing_free *= 2;
  if (resolved_at <= 0 || aliasing_free < resolved_at) resolved_at = aliasing_free;
  auto done = [&](const BoundaryData& d, double cur) {
    if (d.resolution() >= resolved_at) return true;
    const double half = trapezoid_poisson(d.samples(), 2, z);
    return std::abs(cur - half) <= opt.tol * std::max(1.0, std::abs(cur));
  };
  BoundaryData d = g;
  while (true) {
    const double cur = trapezoid_poisson(d.samples(), 1, z);
    if (done(d, cur)) return cur;
    if (!d.refinable() || 2L * d.resolution() > opt.max_resolution) {
      const long need = resolved_at;
      throw ResolutionError("poisson_extension: |z| = " + std::to_string(r) + " needs " + std::to_string(need) +
                                " boundary nodes, have " + std::to_string(d.resolution()),
                            need);
    }
    d = d.refined();
  }
}

double green(Complex z, Complex w) {
  if (z == w) throw std::invalid_argument("green: z == w (logarithmic pole)");
  // |1 - conj(z) w|^2 - |w - z|^2 = (1 - |z|^2)(1 - |w|^2).
  const double num = std::norm(1.0 - std::conj(z) * w);
  const double x = (1.0 - std::norm(z)) * (1.0 - std::norm(w)) / num;
  if (x < 0.5) return -0.5 * std::log1p(-x);
  return 0.5 * std::log(num / std::norm(w - z));
}

double green_weight_potential(Complex w, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("green_weight_potential: need 0 < alpha < 1");
  const double x = std::abs(w);
  if (!(x < 1.0)) throw std::invalid_argument("green_weight_potential: need |w| < 1");
  // Circle means of G_w are log(1/max(|z|, |w|)), which leaves
  // (V(x) - log(1/x)) / (1 - alpha) after integrating by parts.
  if (x < 1e-3) {
    auto g = [alpha](double r) { return std::expm1((alpha - 1.0) * std::log1p(-r * r)) / r; };
    const auto q = quad::integrate_interval(g, x, 1.0, {1e-13, 1e-300}, {false, true});
    return q.value / (1.0 - alpha);
  }
  return (specfun::radial_tail_weight(alpha, x, 1.0 - x) + std::log(x)) / (1.0 - alpha);
}

quad::QuadResult boundary_p_mean(const zoo::TestFunction& f, double p, double rel_tol) {
  auto g = [&f, p](double t) { return std::pow(f.boundary_modulus(t), p); };
  (void)f.boundary_modulus(0.5);  // surfaces std::logic_error early
  return circle_mean_adaptive(g, f.singular_angles(), {}, rel_tol);
}

quad::QuadResult riesz_defect(const zoo::TestFunction& f, double p, Complex z, Route via, double rel_tol) {
  if (!(p > 0.0)) throw std::invalid_argument("riesz_defect: need p > 0");
  if (!(std::abs(z) < 1.0)) throw std::invalid_argument("riesz_defect: need |z| < 1");
  if (via == Route::poisson) {
    auto g = [&](double t) {
      const double m = f.boundary_modulus(t);
      return m == 0.0 ? 0.0 : std::pow(m, p) * poisson_kernel(z, t);
    };
    std::vector<Peak> peaks;
    if (std::abs(z) > 0.0) peaks.push_back({std::arg(z), 1.0 - std::abs(z)});
    auto q = circle_mean_adaptive(g, f.singular_angles(), peaks, rel_tol);
    q.value -= f.abs_pow(z, p);
    return q;
  }
  if (p < 2.0 && !f.zeros_known())
    throw std::invalid_argument("riesz_defect: p < 2 needs the zeros of " + f.label());
  quad::DiscHints hints;
  hints.interior.push_back(0.0);
  if (p != 2.0)
    for (const auto& w : f.known_zeros()) hints.interior.push_back(discgeom::mobius(z, w));
  for (double t : f.singular_angles()) hints.boundary_angles.push_back(std::arg(discgeom::mobius(z, std::polar(1.0, t))));
  auto F = [&](Complex zeta) {
    const double r = std::abs(zeta);
    if (r == 0.0) return 0.0;
    const auto d = discgeom::mobius_derivs(z, zeta);
    return -std::log(r) * f.density(discgeom::mobius(z, zeta), p) * std::norm(d.first);
  };
  auto q = quad::integrate_disc(F, 0.0, {rel_tol, 1e-300}, hints);
  const double c = 0.5 * p * p;
  q.value *= c;
  q.abs_error_estimate *= c;
  return q;
}

norms::NormEstimate rho(const norms::DensityProfile& prof, double boundary_mean) {
  const double alpha = prof.sp.alpha;
  const double p2 = prof.sp.p * prof.sp.p;
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("rho: need 0 < alpha < 1");
  const double R0 = prof.poisson_radius;
  const double H = boundary_mean;
  const double k = 1.0 / (1.0 - alpha);

  auto c_of = [alpha](double x) { return std::pow((1.0 - x) * (1.0 + x), alpha - 1.0); };
  auto L_of = [](double x) { return -std::log(x); };
  // C(x) = int_x^1 2 r (1 - r^2)^(alpha - 2) log(1/r) dr * (1 - alpha).
  auto C_of = [&](double x, double omx) {
    return specfun::radial_tail_weight(alpha, x, omx) - c_of(x) * L_of(x);
  };

  const double s0_in = prof.sum(0, 0.0, R0);
  const double sv_in = prof.sum(1, 0.0, R0);
  const double sl_in = prof.sum(2, 0.0, R0);
  const double part1 = H * prof.sum(4, 0.0, R0) - prof.sum(5, 0.0, R0);
  const double sv_out = prof.tail_v.extrapolated - sv_in;
  const double sl_out = prof.tail_l.extrapolated - sl_in;
  const double cR0 = c_of(R0);
  const double CR0 = C_of(R0, 1.0 - R0);

  norms::NormEstimate est;
  est.method = norms::Method::rho;
  est.value_p_power = part1 + p2 * k * (CR0 * s0_in + sv_out - cR0 * sl_out);
  est.quad.value = est.value_p_power;
  est.quad.abs_error_estimate =
      H * prof.shell_error[4] + prof.shell_error[5] +
      p2 * k * (CR0 * prof.shell_error[0] + prof.shell_error[1] + prof.tail_v.change + cR0 * (prof.shell_error[2] + prof.tail_l.change));
  est.quad.evaluations = prof.evaluations;
  est.quad.converged = prof.shells_converged && stable(prof.tail_v, 1e-6) && stable(prof.tail_l, 1e-6);

  std::vector<double> radii, values;
  for (int kk = 2; kk <= prof.probe_radii + 1; ++kk) {
    const double R = quad::dyadic_radius(kk);
    if (R > prof.edges.back()) break;
    double v;
    if (R <= R0) {
      v = H * prof.sum(4, 0.0, R) - prof.sum(5, 0.0, R);
    } else {
      const double omR = std::ldexp(1.0, -kk);
      const double CR = C_of(R, omR);
      const double s0_mid = prof.sum(0, R0, R);
      const double sv_mid = prof.sum(1, R0, R);
      const double sl_mid = prof.sum(2, R0, R);
      const double sl_tail = prof.tail_l.extrapolated - prof.sum(2, 0.0, R);
      v = part1 + p2 * k *
                      ((CR0 - CR) * s0_in + (sv_mid - cR0 * sl_mid - CR * s0_mid) + (c_of(R) - cR0) * sl_tail);
    }
    radii.push_back(R);
    values.push_back(v);
  }
  est.divergence = quad::classify_truncations(std::move(radii), std::move(values));
  return est;
}

norms::NormEstimate rho(const zoo::TestFunction& f, norms::SpaceParams sp, const norms::NormOptions& opt) {
  sp.validate();
  if (!(sp.alpha < 1.0)) throw std::invalid_argument("rho: need 0 < alpha < 1");
  const auto prof = norms::density_profile(f, sp, opt);
  double H;
  try {
    H = boundary_p_mean(f, sp.p).value;
  } catch (const std::logic_error&) {
    // Hardy-Stein: the boundary mean is |f(0)|^p + p^2 int t A log(1/t).
    H = prof.f0_p + sp.p * sp.p * prof.tail_l.extrapolated;
  }
  return rho(prof, H);
}

norms::NormEstimate inner_divisor_criterion(const zoo::TestFunction& theta, const zoo::TestFunction& f,
                                            norms::SpaceParams sp, double rel_tol) {
  sp.validate();
  if (!(sp.alpha < 1.0)) throw std::invalid_argument("inner_divisor_criterion: need 0 < alpha < 1");
  if (theta.structure() != zoo::Structure::inner)
    throw std::invalid_argument("inner_divisor_criterion: " + theta.label() + " is not inner");
  const double p = sp.p;
  const double alpha = sp.alpha;
  quad::DiscHints hints;
  hints.boundary_angles = theta.singular_angles();
  for (double t : f.singular_angles()) hints.boundary_angles.push_back(t);
  auto F = [&](Complex z) { return theta.one_minus_abs(z) * f.abs_pow(z, p); };
  auto w = [alpha](double t, double omt) { return std::pow(omt * (1.0 + t), alpha - 2.0); };
  quad::ProfileOptions popt;
  popt.rel_tol = rel_tol;
  const auto prof = quad::radial_profile(F, w, hints, popt);
  norms::NormEstimate est;
  est.method = norms::Method::criterion;
  est.value_p_power = prof.value;
  est.quad.value = prof.value;
  est.quad.abs_error_estimate = prof.abs_error_estimate;
  est.quad.evaluations = prof.evaluations;
  est.quad.converged = prof.converged;
  est.divergence = prof.report;
  return est;
}

PowerTrick power_trick_check(const zoo::TestFunction& theta, const zoo::TestFunction& h, norms::SpaceParams sp,
                             double q, const norms::NormOptions& opt) {
  sp.validate();
  if (!(q > 0.0)) throw std::invalid_argument("power_trick_check: need q > 0");
  if (theta.structure() != zoo::Structure::inner)
    throw std::invalid_argument("power_trick_check: " + theta.label() + " is not inner");
  if (h.has_zeros()) throw std::invalid_argument("power_trick_check: " + h.label() + " may vanish");
  PowerTrick out;
  out.lhs = rho(zoo::combine(zoo::CombineOp::product, theta, h), sp, opt);
  const auto hq = zoo::power(h, sp.p / q);
  out.rhs = rho(zoo::combine(zoo::CombineOp::product, theta, hq), {sp.alpha, q}, opt);
  out.same_verdict = out.lhs.verdict() == out.rhs.verdict();
  return out;
}

}  // namespace dirlab::potential
