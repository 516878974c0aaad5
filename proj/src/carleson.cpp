#include "dirlab/carleson.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dirlab::carleson {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double t) {
  double r = std::remainder(t, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// Continuous antiderivative of 1/(1 - 2 rho cos x + rho^2) on the real line.
double poisson_antiderivative(double rho, double x) {
  const double k = std::floor((x + kPi) / kTwoPi);
  const double y = x - kTwoPi * k;  // in [-pi, pi)
  const double scale = 2.0 / ((1.0 - rho) * (1.0 + rho));
  double base;
  if (y == -kPi)
    base = -0.5 * kPi * scale;
  else
    base = scale * std::atan((1.0 + rho) / (1.0 - rho) * std::tan(0.5 * y));
  return base + kTwoPi * k / ((1.0 - rho) * (1.0 + rho));
}

// Angles inside (t0, t1) congruent to c mod 2 pi.
std::vector<double> congruent_inside(double c, double t0, double t1) {
  std::vector<double> out;
  double x = t0 + std::fmod(std::fmod(c - t0, kTwoPi) + kTwoPi, kTwoPi);
  for (; x < t1; x += kTwoPi)
    if (x > t0) out.push_back(x);
  return out;
}

// Breakpoints on [t0, t1] refined around the peak of |1 - conj(a) z|^-s.
std::vector<double> angular_breaks(Complex a, double r, double t0, double t1) {
  std::vector<double> b{t0, t1};
  if (std::abs(a) > 0.0) {
    const double w = 1.0 - std::abs(a) * r;
    for (double c : congruent_inside(std::arg(a), t0, t1))
      for (double m : {-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0}) {
        const double x = c + m * w;
        if (x > t0 && x < t1) b.push_back(x);
      }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// int_{t0}^{t1} |1 - conj(a) r e^{it}|^-s dt.
double angular_integral(const BoxMeasureParams& P, double r, double t0, double t1, bool fast, double rel_tol,
                        long* evals) {
  const double len = t1 - t0;
  if (len <= 0.0) return 0.0;
  const double rho = std::abs(P.a) * r;
  if (P.s == 0.0 || rho == 0.0) return len;
  const double phi = std::arg(P.a);
  if (P.s == 2.0) return poisson_antiderivative(rho, t1 - phi) - poisson_antiderivative(rho, t0 - phi);
  auto g = [&](double t) { return std::pow(std::norm(1.0 - std::conj(P.a) * std::polar(r, t)), -0.5 * P.s); };
  const auto breaks = angular_breaks(P.a, r, t0, t1);
  if (fast) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      sum += boost::math::quadrature::gauss<double, 20>::integrate(g, breaks[i], breaks[i + 1]);
    if (evals) *evals += 20 * static_cast<long>(breaks.size() - 1);
    return sum;
  }
  const auto res = quad::adaptive_gk<1>(quad::scalar_batch(g), breaks, {rel_tol, 1e-300});
  if (evals) *evals += res.evaluations;
  return res.value[0];
}

}  // namespace

namespace {

// int_{r0}^1 h(r) (1 - r)^gamma dr for h analytic on a neighbourhood of
// [r0, 1] except near 1/|a|. Geometric pieces at the scale 1 - |a| keep the
// distance to that singularity comparable to each piece's length.
quad::QuadResult radial_integral(const BoxMeasureParams& P, double r0, const std::function<double(double)>& h, int n,
                                 bool estimate) {
  const double delta = 1.0 - std::abs(P.a);
  double edge = std::max(r0, 1.0 - 4.0 * delta);
  quad::QuadResult out = quad::integrate_jacobi(h, edge, 1.0, P.gamma, n, estimate);
  auto weighted = [&](double r) { return h(r) * std::pow(1.0 - r, P.gamma); };
  for (double width = 4.0 * delta; edge > r0; width *= 2.0) {
    const double lo = std::max(r0, edge - width);
    const auto piece = quad::integrate_jacobi(weighted, lo, edge, 0.0, n, estimate);
    out.value += piece.value;
    out.abs_error_estimate += piece.abs_error_estimate;
    out.evaluations += piece.evaluations;
    edge = lo;
  }
  return out;
}

}  // namespace

void BoxMeasureParams::validate() const {
  if (!(s >= 0.0)) throw std::invalid_argument("BoxMeasureParams: need s >= 0");
  if (!(gamma + 2.0 - s > 0.0)) throw std::invalid_argument("BoxMeasureParams: need gamma + 2 - s > 0");
  if (!(gamma > -1.0)) throw std::invalid_argument("BoxMeasureParams: need gamma > -1");
  if (!(std::abs(a) < 1.0)) throw std::invalid_argument("BoxMeasureParams: need |a| < 1");
}

PolarRect box_rect(Complex w, bool stretched) {
  const discgeom::BoxSpec box{w};
  const double h = std::min(discgeom::box_half_angle(box), kPi);
  const double c = std::arg(w);
  return {discgeom::box_inner_radius(box, stretched), c - h, c + h};
}

std::vector<PolarRect> box_intersection(Complex z, Complex w) {
  const PolarRect A = box_rect(z, false);
  const PolarRect B = box_rect(w, false);
  const double r0 = std::max(A.r0, B.r0);
  std::vector<PolarRect> out;
  const double ha = 0.5 * (A.t1 - A.t0);
  const double hb = 0.5 * (B.t1 - B.t0);
  if (ha >= kPi) return {{r0, B.t0, B.t1}};
  if (hb >= kPi) return {{r0, A.t0, A.t1}};
  const double ca = 0.5 * (A.t0 + A.t1);
  const double d = wrap_pi(0.5 * (B.t0 + B.t1) - ca);
  for (int k = -1; k <= 1; ++k) {
    const double lo = std::max(-ha, d - hb + kTwoPi * k);
    const double hi = std::min(ha, d + hb + kTwoPi * k);
    if (hi > lo) out.push_back({r0, ca + lo, ca + hi});
  }
  return out;
}

quad::QuadResult mu_rect(const BoxMeasureParams& P, const PolarRect& rect, double rel_tol) {
  P.validate();
  quad::QuadResult out;
  const double len = rect.t1 - rect.t0;
  if (len <= 0.0 || rect.r0 >= 1.0) {
    out.converged = true;
    return out;
  }
  const double U = 1.0 - rect.r0;
  if (P.s == 0.0 || std::abs(P.a) == 0.0) {
    // int_{r0}^1 r (1 - r)^gamma dr = U^(g+1)/(g+1) - U^(g+2)/(g+2).
    const double g = P.gamma;
    out.value = len / kPi * (std::pow(U, g + 1.0) / (g + 1.0) - std::pow(U, g + 2.0) / (g + 2.0));
    out.converged = true;
    return out;
  }
  long evals = 0;
  auto theta = [&](double r) { return r * angular_integral(P, r, rect.t0, rect.t1, false, 0.1 * rel_tol, &evals); };
  out = radial_integral(P, rect.r0, theta, 32, true);
  out.converged = out.abs_error_estimate <= rel_tol * std::abs(out.value);
  if (!out.converged) {
    out = radial_integral(P, rect.r0, theta, 64, true);
    out.converged = out.abs_error_estimate <= rel_tol * std::abs(out.value);
  }
  out.value /= kPi;
  out.abs_error_estimate /= kPi;
  out.evaluations += evals;
  return out;
}

double mu_rect_fast(const BoxMeasureParams& P, const PolarRect& rect) {
  const double len = rect.t1 - rect.t0;
  if (len <= 0.0 || rect.r0 >= 1.0) return 0.0;
  if (P.s == 0.0 || std::abs(P.a) == 0.0) return mu_rect(P, rect).value;
  auto theta = [&](double r) { return r * angular_integral(P, r, rect.t0, rect.t1, true, 0.0, nullptr); };
  return radial_integral(P, rect.r0, theta, 12, false).value / kPi;
}

quad::QuadResult mu_box(const BoxMeasureParams& params, Complex w, bool stretched) {
  if (!(std::abs(w) < 1.0)) throw std::invalid_argument("mu_box: need |w| < 1");
  return mu_rect(params, box_rect(w, stretched));
}

double mu_comparator(const BoxMeasureParams& params, Complex w) {
  params.validate();
  return std::pow(1.0 - std::abs(w), params.gamma + 2.0) / std::pow(std::abs(1.0 - std::conj(params.a) * w), params.s);
}

int regime(Complex a, Complex w) {
  if (discgeom::box_contains({a}, w, false)) return 1;
  if (discgeom::box_contains({w}, a, false)) return 2;
  return 3;
}

bool RatioScan::covers_all_regimes() const {
  return std::all_of(regimes.begin(), regimes.end(), [](const RegimeSummary& r) { return r.count > 0; });
}

RatioScan ratio_scan(double gamma, double s, const std::vector<Complex>& a_grid, const std::vector<Complex>& w_grid,
                     ExecPolicy policy) {
  RatioScan scan;
  scan.gamma = gamma;
  scan.s = s;
  scan.entries.resize(a_grid.size() * w_grid.size());
  parallel_for(
      scan.entries.size(),
      [&](std::size_t i) {
        const Complex a = a_grid[i / w_grid.size()];
        const Complex w = w_grid[i % w_grid.size()];
        const BoxMeasureParams P{gamma, s, a};
        RatioEntry e;
        e.a = a;
        e.w = w;
        e.regime = regime(a, w);
        const double plain = mu_box(P, w, false).value;
        e.ratio = plain / mu_comparator(P, w);
        e.stretched_ratio = mu_box(P, w, true).value / plain;
        scan.entries[i] = e;
      },
      policy);
  scan.regimes = {{1, 0, 0.0, 0.0}, {2, 0, 0.0, 0.0}, {3, 0, 0.0, 0.0}};
  bool first = true;
  for (const auto& e : scan.entries) {
    auto& r = scan.regimes[static_cast<std::size_t>(e.regime - 1)];
    if (r.count++ == 0) {
      r.min_ratio = r.max_ratio = e.ratio;
    } else {
      r.min_ratio = std::min(r.min_ratio, e.ratio);
      r.max_ratio = std::max(r.max_ratio, e.ratio);
    }
    if (first) {
      scan.min_ratio = scan.max_ratio = e.ratio;
      first = false;
    }
    scan.min_ratio = std::min(scan.min_ratio, e.ratio);
    scan.max_ratio = std::max(scan.max_ratio, e.ratio);
    scan.max_stretched_ratio = std::max(scan.max_stretched_ratio, e.stretched_ratio);
  }
  return scan;
}

namespace {

std::vector<double> refine_axis(std::vector<double> v, int times) {
  for (int t = 0; t < times; ++t) {
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(v[i]);
      if (i + 1 < v.size()) out.push_back(0.5 * (v[i] + v[i + 1]));
    }
    v = std::move(out);
  }
  return v;
}

}  // namespace

ScanGrid default_scan_grid(int refine) {
  const auto ar = refine_axis({0.0, 0.3, 0.6, 0.8, 0.9, 0.95}, refine);
  const auto wr = refine_axis({0.55, 0.7, 0.8, 0.9, 0.95}, refine);
  const auto wt = refine_axis({0.0, 0.05, 0.2, 0.6, 1.5, 3.0}, refine);
  ScanGrid g;
  for (double r : ar) g.a.emplace_back(r, 0.0);
  for (double r : wr)
    for (double t : wt) g.w.push_back(std::polar(r, t));
  return g;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

quad::QuadResult ars_lhs(const BoxMeasureParams& params, double alpha, Complex w, long mc_samples, std::uint64_t seed,
                         ExecPolicy policy) {
  params.validate();
  if (!(alpha > 0.0) || std::abs(alpha - (params.gamma + 2.0 - params.s)) > 1e-12)
    throw std::invalid_argument("ars_lhs: need alpha = gamma + 2 - s > 0");
  if (mc_samples < 10000) throw std::invalid_argument("ars_lhs: need at least 1e4 samples");
  if (!(std::abs(w) < 1.0)) throw std::invalid_argument("ars_lhs: need |w| < 1");
  const PolarRect outer = box_rect(w, true);
  const double D = 1.0 - outer.r0;
  constexpr int kStrata = 6;
  const long per = (mc_samples + kStrata * kStrata - 1) / (kStrata * kStrata);
  const double cell_d = D / kStrata;
  const double cell_t = (outer.t1 - outer.t0) / kStrata;

  std::vector<double> mean(kStrata * kStrata), var(kStrata * kStrata);
  parallel_for(
      static_cast<std::size_t>(kStrata * kStrata),
      [&](std::size_t cell) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(cell + 1)));
        auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        const double d0 = cell_d * static_cast<double>(cell / kStrata);
        const double t0 = outer.t0 + cell_t * static_cast<double>(cell % kStrata);
        double m = 0.0, m2 = 0.0;
        for (long n = 0; n < per; ++n) {
          const double d = d0 + cell_d * uniform();
          const double t = t0 + cell_t * uniform();
          double f = 0.0;
          if (d > 0.0) {
            const Complex z = std::polar(1.0 - d, t);
            double mu = 0.0;
            for (const auto& rect : box_intersection(z, w)) mu += mu_rect_fast(params, rect);
            f = mu * mu * (1.0 - d) / (kPi * std::pow(d, 2.0 + alpha));
          }
          const double delta = f - m;
          m += delta / static_cast<double>(n + 1);
          m2 += delta * (f - m);
        }
        mean[cell] = m;
        var[cell] = per > 1 ? m2 / static_cast<double>(per - 1) : 0.0;
      },
      policy);

  const double vol = cell_d * cell_t;
  quad::QuadResult out;
  double err2 = 0.0;
  for (std::size_t c = 0; c < mean.size(); ++c) {
    out.value += vol * mean[c];
    err2 += vol * vol * var[c] / static_cast<double>(per);
  }
  out.abs_error_estimate = 2.0 * std::sqrt(err2);  // two standard errors
  out.evaluations = per * kStrata * kStrata;
  out.converged = out.abs_error_estimate <= 0.05 * std::abs(out.value);
  return out;
}

ArsScan ars_uniformity_scan(double gamma, double s, double alpha, const std::vector<Complex>& a_grid,
                            const std::vector<Complex>& w_grid, std::uint64_t seed, long mc_samples,
                            ExecPolicy policy) {
  if (a_grid.empty() || w_grid.empty()) throw std::invalid_argument("ars_uniformity_scan: empty grid");
  ArsScan scan;
  scan.gamma = gamma;
  scan.s = s;
  scan.alpha = alpha;
  scan.seed = seed;
  for (std::size_t i = 0; i < a_grid.size(); ++i)
    for (std::size_t j = 0; j < w_grid.size(); ++j) {
      const BoxMeasureParams P{gamma, s, a_grid[i]};
      ArsEntry e;
      e.a = a_grid[i];
      e.w = w_grid[j];
      // Each grid point gets its own stream, fixed by its indices.
      const auto q = ars_lhs(P, alpha, e.w, mc_samples, splitmix64(seed + 1000003ULL * i + j), policy);
      e.lhs = q.value;
      e.lhs_error = q.abs_error_estimate;
      e.mu_w = mu_box(P, e.w, false).value;
      e.ratio = e.lhs / e.mu_w;
      scan.entries.push_back(e);
    }
  scan.max_by_a.assign(a_grid.size(), 0.0);
  scan.max_by_w.assign(w_grid.size(), 0.0);
  scan.min_ratio = scan.max_ratio = scan.entries.front().ratio;
  for (std::size_t k = 0; k < scan.entries.size(); ++k) {
    const double r = scan.entries[k].ratio;
    scan.min_ratio = std::min(scan.min_ratio, r);
    scan.max_ratio = std::max(scan.max_ratio, r);
    scan.max_by_a[k / w_grid.size()] = std::max(scan.max_by_a[k / w_grid.size()], r);
    scan.max_by_w[k % w_grid.size()] = std::max(scan.max_by_w[k % w_grid.size()], r);
  }
  auto growth = [](const std::vector<double>& v) {
    if (v.size() < 3) return false;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return v.back() > 1.5 * v.front();
  };
  scan.growth_in_a = growth(scan.max_by_a);
  scan.growth_in_w = growth(scan.max_by_w);
  return scan;
}

}  // namespace dirlab::carleson
