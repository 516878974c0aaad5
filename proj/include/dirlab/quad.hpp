#pragma once

// Quadrature engines: adaptive Gauss-Kronrod on intervals (with graded
// partitions toward singular points), periodic trapezoid and graded angular
// means on circles, shell-wise disc integration, and the divergence prober.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dirlab/discgeom.hpp"
#include "dirlab/parallel.hpp"

namespace dirlab::quad {

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  bool converged = false;
  long evaluations = 0;
};

struct Tolerance {
  double rel = 1e-10;
  double abs = 0.0;
};

template <std::size_t N>
using Vec = std::array<double, N>;

// ---------------------------------------------------------------------------
// Gauss-Kronrod 10/21 rule

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for kXgk[1], kXgk[3], ..., kXgk[9].
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline constexpr int kNodes = 21;

/// The 21 abscissae of [a, b]: index 0..9 left, 10..19 right, 20 centre.
inline void gk21_nodes(double a, double b, std::span<double, kNodes> out) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (int i = 0; i < 10; ++i) {
    out[i] = c - h * kXgk[i];
    out[10 + i] = c + h * kXgk[i];
  }
  out[20] = c;
}

template <std::size_t N>
void gk21_combine(double a, double b, std::span<const Vec<N>, kNodes> f, Vec<N>& value, Vec<N>& error) {
  const double h = 0.5 * (b - a);
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (std::size_t c = 0; c < N; ++c) {
    const double fc = f[20][c];
    double resk = kWgk[10] * fc;
    double resg = 0.0;
    double resabs = std::abs(resk);
    for (int i = 0; i < 10; ++i) {
      const double s = f[i][c] + f[10 + i][c];
      resk += kWgk[i] * s;
      resabs += kWgk[i] * (std::abs(f[i][c]) + std::abs(f[10 + i][c]));
      if (i % 2 == 1) resg += kWg[i / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int i = 0; i < 10; ++i) resasc += kWgk[i] * (std::abs(f[i][c] - mean) + std::abs(f[10 + i][c] - mean));
    const double ah = std::abs(h);
    resasc *= ah;
    resabs *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    value[c] = resk * h;
    error[c] = std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
  }
}

}  // namespace detail

template <std::size_t N>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  Vec<N> value{};
  Vec<N> error{};
};

template <std::size_t N>
struct AdaptiveResult {
  Vec<N> value{};
  Vec<N> error{};
  long evaluations = 0;
  bool converged = false;
  std::vector<Panel<N>> panels;
};

/// Batch integrand: fills out[i] = f(xs[i]).
template <std::size_t N>
using BatchFn = std::function<void(std::span<const double>, std::span<Vec<N>>)>;

/// Globally adaptive GK21 over the partition given by `breakpoints`
/// (sorted, at least two points). The worst panel is bisected until every
/// component meets max(tol.abs, tol.rel * |total|), the panel cap is hit, or
/// should_stop() returns true.
template <std::size_t N>
AdaptiveResult<N> adaptive_gk(const BatchFn<N>& f, std::span<const double> breakpoints, Tolerance tol,
                              int max_panels = 4000, const std::function<bool()>& should_stop = {}) {
  AdaptiveResult<N> result;
  const std::size_t npan = breakpoints.size() - 1;
  auto evaluate = [&](std::span<const std::pair<double, double>> intervals) {
    std::vector<double> xs(intervals.size() * detail::kNodes);
    for (std::size_t k = 0; k < intervals.size(); ++k)
      detail::gk21_nodes(intervals[k].first, intervals[k].second,
                         std::span<double, detail::kNodes>(xs.data() + k * detail::kNodes, detail::kNodes));
    std::vector<Vec<N>> fx(xs.size());
    f(xs, fx);
    result.evaluations += static_cast<long>(xs.size());
    std::vector<Panel<N>> out(intervals.size());
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      out[k].a = intervals[k].first;
      out[k].b = intervals[k].second;
      detail::gk21_combine<N>(out[k].a, out[k].b,
                              std::span<const Vec<N>, detail::kNodes>(fx.data() + k * detail::kNodes, detail::kNodes),
                              out[k].value, out[k].error);
    }
    return out;
  };

  std::vector<std::pair<double, double>> initial;
  initial.reserve(npan);
  for (std::size_t i = 0; i < npan; ++i)
    if (breakpoints[i + 1] > breakpoints[i]) initial.emplace_back(breakpoints[i], breakpoints[i + 1]);
  result.panels = evaluate(initial);

  auto totals = [&]() {
    Vec<N> v{}, e{};
    for (const auto& p : result.panels)
      for (std::size_t c = 0; c < N; ++c) {
        v[c] += p.value[c];
        e[c] += p.error[c];
      }
    result.value = v;
    result.error = e;
  };
  totals();

  auto target = [&](std::size_t c) { return std::max(tol.abs, tol.rel * std::abs(result.value[c])); };
  auto satisfied = [&]() {
    for (std::size_t c = 0; c < N; ++c)
      if (!(result.error[c] <= target(c))) return false;
    return true;
  };

  // Panels this narrow would put nodes within a few ulps of their ends.
  auto too_narrow = [](const Panel<N>& p) {
    return p.b - p.a <= 4096.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(p.a), std::abs(p.b));
  };
  while (!satisfied() && static_cast<int>(result.panels.size()) < max_panels && !(should_stop && should_stop())) {
    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t k = 0; k < result.panels.size(); ++k) {
      if (too_narrow(result.panels[k])) continue;
      double score = 0.0;
      for (std::size_t c = 0; c < N; ++c) {
        const double t = std::max(target(c), std::numeric_limits<double>::min());
        score = std::max(score, result.panels[k].error[c] / t);
      }
      if (score > worst_score) {
        worst_score = score;
        worst = k;
      }
    }
    if (worst_score < 0.0) break;
    const Panel<N> old = result.panels[worst];
    const double mid = 0.5 * (old.a + old.b);
    if (!(mid > old.a && mid < old.b)) break;  // exhausted floating-point resolution
    const std::pair<double, double> halves[2] = {{old.a, mid}, {mid, old.b}};
    auto fresh = evaluate(halves);
    for (std::size_t c = 0; c < N; ++c) {
      result.value[c] += fresh[0].value[c] + fresh[1].value[c] - old.value[c];
      result.error[c] += fresh[0].error[c] + fresh[1].error[c] - old.error[c];
    }
    result.panels[worst] = fresh[0];
    result.panels.push_back(fresh[1]);
    // Re-sum periodically to avoid drift in the running totals.
    if (result.panels.size() % 64 == 0) totals();
  }
  totals();
  result.converged = satisfied();
  return result;
}

/// A point toward which a partition is geometrically graded.
struct GradePoint {
  double x = 0.0;
  double min_width = 0.0;  // finest panel width next to x
};

/// Breakpoints on [lo, hi] graded (ratio 2) toward every grade point inside
/// [lo, hi]. Between two grade points the grading meets in the middle.
std::vector<double> graded_breakpoints(double lo, double hi, std::span<const GradePoint> points);

/// Wraps a pointwise scalar function as a batch integrand (serial).
BatchFn<1> scalar_batch(std::function<double(double)> f);

// ---------------------------------------------------------------------------
// Public scalar engines

struct EndpointFlags {
  bool lo_singular = false;
  bool hi_singular = false;
};

/// Adaptive GK21 on [lo, hi]. Flagged endpoints get a geometric grading
/// (equivalent to the substitution |x - endpoint| = e^{-u} on a uniform
/// u-grid) and the unresolved remainder next to the endpoint is estimated
/// by geometric extrapolation of the last graded panels.
QuadResult integrate_interval(const std::function<double(double)>& f, double lo, double hi, Tolerance tol,
                              EndpointFlags flags = {});

/// n-point Gauss-Jacobi rule for weight (1 - x)^a (1 + x)^b on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_jacobi(int n, double a, double b);

/// int_lo^hi h(r) (hi - r)^gamma dr for h analytic on [lo, hi]. With
/// `estimate`, the 3n/2 point rule is applied too and the difference is
/// the error estimate.
QuadResult integrate_jacobi(const std::function<double(double)>& h, double lo, double hi, double gamma, int n = 32,
                            bool estimate = true);

/// Mean of a 2 pi-periodic function, (1/2 pi) int_0^{2 pi} g(t) dt, by the
/// trapezoid rule with node doubling from 64 nodes until successive
/// estimates differ by at most tol.
QuadResult integrate_circle(const std::function<double(double)>& g, double tol, int max_nodes = 1 << 20);

// ---------------------------------------------------------------------------
// Angular means with hints

struct DiscHints {
  std::vector<Complex> interior;         // zeros or interior singular points
  std::vector<double> boundary_angles;   // boundary singular / concentration points
};

struct AngularOptions {
  Tolerance tol{1e-10, 1e-300};
  int max_panels = 3000;
  int max_trapezoid_nodes = 1 << 16;
};

/// Angular concentration points of the circle |z| = r implied by `hints`,
/// with the finest feature width at that radius.
std::vector<GradePoint> angular_grade_points(const DiscHints& hints, double r);

/// Relative accuracy attainable on |z| = r next to an off-origin zero z_k:
/// z - z_k is formed with rounding error eps |z_k|.
double angular_noise_floor(const DiscHints& hints, double r);

/// Mean of sampler(r e^{it}) over t. Uses graded GK around hinted angles,
/// or the doubling trapezoid rule when no hint applies.
template <std::size_t N, class Sampler>
Vec<N> circle_mean(const Sampler& sampler, double r, const DiscHints& hints, const AngularOptions& opt,
                   long* evaluations = nullptr, bool* converged = nullptr) {
  const auto points = angular_grade_points(hints, r);
  bool ok = true;
  Vec<N> mean{};
  if (points.empty() || r == 0.0) {
    int n = 64;
    Vec<N> sum{};
    long evals = 0;
    for (int j = 0; j < n; ++j) {
      const auto v = sampler(std::polar(r, 2.0 * std::numbers::pi * j / n));
      for (std::size_t c = 0; c < N; ++c) sum[c] += v[c];
    }
    evals += n;
    Vec<N> prev{};
    for (std::size_t c = 0; c < N; ++c) prev[c] = sum[c] / n;
    ok = false;
    while (n < opt.max_trapezoid_nodes) {
      for (int j = 0; j < n; ++j) {
        const auto v = sampler(std::polar(r, 2.0 * std::numbers::pi * (j + 0.5) / n));
        for (std::size_t c = 0; c < N; ++c) sum[c] += v[c];
      }
      evals += n;
      n *= 2;
      bool done = true;
      for (std::size_t c = 0; c < N; ++c) {
        mean[c] = sum[c] / n;
        if (!(std::abs(mean[c] - prev[c]) <= std::max(opt.tol.abs, opt.tol.rel * std::abs(mean[c])))) done = false;
      }
      prev = mean;
      if (done) {
        ok = true;
        break;
      }
    }
    mean = prev;
    if (evaluations) *evaluations += evals;
    if (converged) *converged = ok;
    return mean;
  }

  const double start = points.front().x;
  std::vector<GradePoint> shifted;
  shifted.reserve(points.size() + 1);
  for (const auto& p : points) {
    double x = std::fmod(p.x - start, 2.0 * std::numbers::pi);
    if (x < 0) x += 2.0 * std::numbers::pi;
    shifted.push_back({start + x, p.min_width});
  }
  shifted.push_back({start + 2.0 * std::numbers::pi, points.front().min_width});
  const auto breaks = graded_breakpoints(start, start + 2.0 * std::numbers::pi, shifted);
  BatchFn<N> batch = [&](std::span<const double> ts, std::span<Vec<N>> out) {
    for (std::size_t i = 0; i < ts.size(); ++i) out[i] = sampler(std::polar(r, ts[i]));
  };
  Tolerance tol = opt.tol;
  tol.rel = std::max(tol.rel, angular_noise_floor(hints, r));
  auto res = adaptive_gk<N>(batch, breaks, tol, opt.max_panels);
  for (std::size_t c = 0; c < N; ++c) mean[c] = res.value[c] / (2.0 * std::numbers::pi);
  if (evaluations) *evaluations += res.evaluations;
  if (converged) *converged = res.converged;
  return mean;
}

// ---------------------------------------------------------------------------
// Shell integration

struct DiscOptions {
  AngularOptions angular;
  Tolerance radial_tol{1e-9, 1e-300};
  int max_radial_panels = 800;
  long max_evaluations = std::numeric_limits<long>::max();  // per shell
  ExecPolicy policy = default_policy();
};

template <std::size_t N>
struct ShellResult {
  double r0 = 0.0;
  double r1 = 0.0;
  Vec<N> value{};
  Vec<N> error{};
  long evaluations = 0;
  bool converged = true;
};

/// Radial grade points for a shell [r0, r1]: the moduli of interior hints
/// lying in the shell (the origin only when it is itself a hint).
std::vector<GradePoint> radial_grade_points(const DiscHints& hints, double r0, double r1);

/// Integrates moments(t, 1 - t, means(t)) dt over [r0, r1], where means(t)
/// is the angular mean of `sampler` on |z| = t. Radial GK nodes of one batch
/// are evaluated through parallel_for; output is schedule-independent.
template <std::size_t NA, std::size_t NM, class Sampler, class Moments>
ShellResult<NM> integrate_shell(const Sampler& sampler, const Moments& moments, double r0, double r1,
                                const DiscHints& hints, const DiscOptions& opt) {
  ShellResult<NM> shell;
  shell.r0 = r0;
  shell.r1 = r1;
  const auto gpoints = radial_grade_points(hints, r0, r1);
  const auto breaks = graded_breakpoints(r0, r1, gpoints);
  std::vector<long> evals_slot;
  bool angular_ok = true;
  BatchFn<NM> batch = [&](std::span<const double> ts, std::span<Vec<NM>> out) {
    std::vector<long> evals(ts.size(), 0);
    std::vector<char> ok(ts.size(), 1);
    parallel_for(
        ts.size(),
        [&](std::size_t i) {
          const double t = ts[i];
          bool conv = true;
          const Vec<NA> means = circle_mean<NA>(sampler, t, hints, opt.angular, &evals[i], &conv);
          ok[i] = conv ? 1 : 0;
          out[i] = moments(t, 1.0 - t, means);
        },
        opt.policy);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      shell.evaluations += evals[i];
      if (!ok[i]) angular_ok = false;
    }
  };
  auto res = adaptive_gk<NM>(batch, breaks, opt.radial_tol, opt.max_radial_panels,
                             [&] { return shell.evaluations >= opt.max_evaluations; });
  shell.value = res.value;
  shell.error = res.error;
  shell.converged = res.converged && angular_ok;
  return shell;
}

/// Dyadic radius 1 - 2^-k.
inline double dyadic_radius(int k) { return 1.0 - std::ldexp(1.0, -k); }

// ---------------------------------------------------------------------------
// Divergence classification

enum class Verdict { converged, diverged, inconclusive };

std::string to_string(Verdict v);

struct DivergenceReport {
  std::vector<double> radii;
  std::vector<double> truncated_values;
  double fitted_exponent = 0.0;   // slope of log2(value) against k = -log2(1 - R)
  double increment_ratio = 0.0;   // geometric mean of the last increment ratios
  double tail_estimate = 0.0;     // geometric tail beyond the last radius (converged only)
  bool log_divergence = false;    // increments neither decay nor grow
  Verdict verdict = Verdict::inconclusive;
};

/// Thresholds of the prober, on the per-shell decay exponent
/// e = -log2(increment ratio).
struct ProbeThresholds {
  double converge_min_decay = 0.06;  // e >= this: converged
  double log_band = 0.03;            // |e| < this: logarithmic divergence
  double diverge_min_slope = 0.05;   // power divergence also needs this fitted exponent
};

/// Classifies a sequence of truncations over radii 1 - 2^-k.
DivergenceReport classify_truncations(std::vector<double> radii, std::vector<double> values,
                                      ProbeThresholds thresholds = {});

/// Geometric extrapolation of a series from its last increments:
/// tail = d_K q / (1 - q) with q = d_K / d_{K-1}.
struct GeometricTail {
  double tail = 0.0;
  double ratio = 0.0;
  bool ok = false;  // false when the increments do not decay geometrically
};
GeometricTail geometric_tail(std::span<const double> increments);

/// Running extrapolated totals of a dyadic shell series; `stable` once two
/// successive extrapolations agree to `rel_tol`.
struct SeriesState {
  double partial = 0.0;
  double extrapolated = 0.0;
  double change = std::numeric_limits<double>::infinity();
  double ratio = 0.0;
  bool decaying = false;
};
SeriesState series_state(std::span<const double> increments);

/// Shell edges 0, 1/2, 3/4, ..., 1 - 2^-depth with `extra` radii inserted.
std::vector<double> dyadic_edges(int depth, std::span<const double> extra = {});

struct RadialProfile {
  std::vector<double> edges;         // shell i covers [edges[i], edges[i+1]]
  std::vector<double> shell_values;
  double value = 0.0;                // extrapolated full integral
  double abs_error_estimate = 0.0;
  bool converged = false;
  long evaluations = 0;
  DivergenceReport report;           // truncations at 1 - 2^-k, k = 2 .. probe_radii + 1
};

struct ProfileOptions {
  double rel_tol = 1e-9;
  int probe_radii = 12;
  int max_depth = 26;
  double max_ratio = 0.97;  // shells decaying slower than this: stop, tail is not summable in practice
  long max_evaluations = 20'000'000;  // checked once the probe radii are done
  ExecPolicy policy = default_policy();
};

/// int F(z) w(|z|, 1 - |z|) dA(z) over the disc, shell by shell, with the
/// truncation report. The weight receives 1 - |z| exactly.
RadialProfile radial_profile(const std::function<double(Complex)>& F,
                             const std::function<double(double, double)>& weight, const DiscHints& hints,
                             const ProfileOptions& opt = {});

/// int F(z) (1 - |z|)^gamma dA(z), dA normalized to total mass 1.
QuadResult integrate_disc(const std::function<double(Complex)>& F, double gamma, Tolerance tol,
                          const DiscHints& hints = {}, int max_depth = 26);

/// Truncations of int F (1 - |z|)^gamma dA over R_k D, R_k = 1 - 2^-k,
/// k = 2 .. radii_count + 1, with verdict.
DivergenceReport divergence_probe(const std::function<double(Complex)>& F, double gamma, int radii_count,
                                  const DiscHints& hints = {});

}  // namespace dirlab::quad
