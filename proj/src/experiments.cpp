#include "dirlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "dirlab/carleson.hpp"
#include "dirlab/norms.hpp"
#include "dirlab/potential.hpp"
#include "dirlab/specfun.hpp"
#include "dirlab/zoo.hpp"

namespace dirlab::replicate {

namespace {

using norms::NormEstimate;
using norms::SpaceParams;
using quad::Verdict;

std::string num(double v) { return format_number(v); }

norms::NormOptions norm_options(const ExperimentConfig& cfg) {
  norms::NormOptions opt;
  opt.probe_radii = cfg.probe_radii;
  opt.rel_tol = cfg.rel_tol;
  opt.policy = cfg.policy;
  return opt;
}

Json estimate_json(const NormEstimate& e) {
  Json j;
  j["value"] = e.value_p_power;
  j["verdict"] = quad::to_string(e.verdict());
  if (e.divergence) {
    j["decay_exponent"] = -std::log2(e.divergence->increment_ratio);
    j["truncations"] = e.divergence->truncated_values;
  }
  j["evaluations"] = e.quad.evaluations;
  return j;
}

std::string verdict_name(Verdict v) { return quad::to_string(v); }

// Strictly increasing along the grid and ending 50% above the start.
bool growth_trend(const std::vector<double>& v) {
  if (v.size() < 3) return false;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return v.back() > 1.5 * v.front();
}

// ---------------------------------------------------------------------------

Report e1(const ExperimentConfig& cfg) {
  Report r;
  const auto opt = norm_options(cfg);
  CsvBlock grid{"monomial_grid", {"alpha", "p", "n", "closed_form", "quadrature", "rel_error"}, {}};
  double worst = 0.0;
  for (double alpha : {0.3, 0.5, 0.9})
    for (double p : {0.7, 1.0, 2.0, 3.0, 6.0})
      for (int n = 1; n <= 8; ++n) {
        const SpaceParams sp{alpha, p};
        const double exact = norms::monomial_norm_p_power(n, sp);
        const double quad = norms::norm_radial(zoo::make_monomial(n), sp, opt).value_p_power;
        const double err = std::abs(quad / exact - 1.0);
        worst = std::max(worst, err);
        grid.add_row({num(alpha), num(p), std::to_string(n), num(exact), num(quad), num(err)});
      }
  r.series.push_back(std::move(grid));
  r.results["monomial_worst_rel_error"] = worst;
  r.check("norm_radial(e_n) matches the Gamma closed form on n=1..8, p in {0.7,1,2,3,6}, alpha in {0.3,0.5,0.9}",
          worst <= 1e-5, {{"worst_rel_error", worst}}, "rel <= 1e-5");

  // Monotonicity in p fails: ||e_5|| > 1 at p but tends to 1 as p grows.
  const SpaceParams sp{cfg.alpha, cfg.p};
  const double n1 = std::pow(norms::monomial_norm_p_power(5, sp), 1.0 / cfg.p);
  const double n100 = std::pow(norms::monomial_norm_p_power(5, {cfg.alpha, 100.0}), 1.0 / 100.0);
  const double nq = std::pow(norms::norm_radial(zoo::make_monomial(5), sp, opt).value_p_power, 1.0 / cfg.p);
  r.results["e5_norm_p"] = n1;
  r.results["e5_norm_p100"] = n100;
  r.results["e5_norm_p_quadrature"] = nq;
  r.check("||e_5|| exceeds 1", n1 > 1.0, {{"norm", n1}}, "strict");
  r.check("||e_5|| at p = 100 is smaller than at p", n100 < n1, {{"norm_p", n1}, {"norm_p100", n100}}, "strict");
  r.check("quadrature cross-check of ||e_5||", std::abs(nq / n1 - 1.0) <= 1e-6,
          {{"closed_form", n1}, {"quadrature", nq}}, "rel <= 1e-6");
  CsvBlock series{"e5_norm_vs_p", {"p", "norm"}, {}};
  for (double q : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 100.0})
    series.add_row({num(q), num(std::pow(norms::monomial_norm_p_power(5, {cfg.alpha, q}), 1.0 / q))});
  r.series.push_back(std::move(series));
  return r;
}

Report e2(const ExperimentConfig& cfg) {
  Report r;
  const auto opt = norm_options(cfg);
  const double alpha = cfg.alpha;
  std::vector<std::pair<std::string, zoo::TestFunction>> battery;
  for (int n : {1, 3}) battery.emplace_back("e_" + std::to_string(n), zoo::make_monomial(n));
  battery.emplace_back("blaschke(0.5)", zoo::make_blaschke({0.5}));
  battery.emplace_back("blaschke(0.5,-0.7i)", zoo::make_blaschke({0.5, Complex(0.0, -0.7)}));
  for (double b : {-0.2, 0.0, 0.25, 0.6}) battery.emplace_back("fab(1," + num(b) + ")", zoo::make_fab({1.0, b}));

  CsvBlock block{"rho_vs_norm", {"function", "p", "norm", "norm_verdict", "rho", "rho_verdict", "ratio"}, {}};
  int agree = 0, total = 0;
  double cmin = INFINITY, cmax = 0.0;
  Json items = Json::array();
  for (double p : {1.0, 2.0, 3.0})
    for (const auto& [name, f] : battery) {
      const SpaceParams sp{alpha, p};
      const auto n = norms::norm_radial(f, sp, opt);
      const auto rho = potential::rho(f, sp, opt);
      ++total;
      const bool same = n.verdict() == rho.verdict();
      agree += same;
      double ratio = NAN;
      if (n.verdict() == Verdict::converged && rho.verdict() == Verdict::converged) {
        // ||f||^p against ||f||_{H^p}^p + rho(f), the two sides of the equivalence.
        double H;
        try {
          H = potential::boundary_p_mean(f, p).value;
        } catch (const std::logic_error&) {
          H = n.value_p_power - (1.0 - alpha) * rho.value_p_power;
        }
        ratio = (H + rho.value_p_power) / n.value_p_power;
        cmin = std::min(cmin, ratio);
        cmax = std::max(cmax, ratio);
      }
      block.add_row({name, num(p), num(n.value_p_power), verdict_name(n.verdict()), num(rho.value_p_power),
                     verdict_name(rho.verdict()), num(ratio)});
      items.push_back({{"function", name}, {"p", p}, {"norm", estimate_json(n)}, {"rho", estimate_json(rho)}});
    }
  r.series.push_back(std::move(block));
  r.results["battery"] = std::move(items);
  r.check("rho verdict equals norm verdict on the whole battery", agree == total,
          {{"agree", agree}, {"total", total}}, "100%");
  r.check("equivalence constants on finite cases", cmax / cmin <= 50.0, {{"c1", cmin}, {"c2", cmax}}, "c2/c1 <= 50");

  // p = 2: quadrature against the coefficient formula on random polynomials.
  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  double worst = 0.0;
  CsvBlock poly{"p2_oracle", {"alpha", "degree", "coefficient_norm", "quadrature", "rel_error"}, {}};
  for (double a : {0.25, 0.5, 0.75})
    for (int k = 0; k < 20; ++k) {
      const int deg = static_cast<int>(rng() % 9);
      std::vector<Complex> c(static_cast<std::size_t>(deg) + 1);
      for (auto& x : c) x = {2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0};
      const double exact = norms::norm_coeff_p2(c, a);
      const double quad = norms::norm_radial(zoo::make_polynomial(c), {a, 2.0}, opt).value_p_power;
      const double err = std::abs(quad / exact - 1.0);
      worst = std::max(worst, err);
      poly.add_row({num(a), std::to_string(deg), num(exact), num(quad), num(err)});
    }
  r.series.push_back(std::move(poly));
  r.check("p = 2 quadrature norm equals the coefficient norm on 20 random polynomials per alpha", worst <= 1e-4,
          {{"worst_rel_error", worst}}, "rel <= 1e-4");
  return r;
}

Report e3(const ExperimentConfig& cfg) {
  Report r;
  const auto opt = norm_options(cfg);
  CsvBlock block{"fab_threshold", {"alpha", "b", "side", "verdict", "decay_exponent"}, {}};
  bool ok = true;
  Json items = Json::array();
  for (double alpha : {0.3, 0.5, 0.7}) {
    const double threshold = 0.5 - alpha;
    for (double side : {+1.0, -1.0}) {
      const double b = threshold + side * 0.15;
      const auto n = norms::norm_radial(zoo::make_fab({1.0, b}), {alpha, cfg.p}, opt);
      const Verdict want = side > 0 ? Verdict::converged : Verdict::diverged;
      const bool pass = n.verdict() == want;
      ok = ok && pass;
      const double e = -std::log2(n.divergence->increment_ratio);
      block.add_row({num(alpha), num(b), side > 0 ? "above" : "below", verdict_name(n.verdict()), num(e)});
      items.push_back({{"alpha", alpha}, {"b", b}, {"expected", verdict_name(want)}, {"estimate", estimate_json(n)}});
    }
  }
  r.series.push_back(std::move(block));
  r.results["cases"] = std::move(items);
  r.check("f_{1,b} converges for b = 1/2 - alpha + 0.15 and diverges for b = 1/2 - alpha - 0.15", ok, Json::object(),
          "probe verdict with " + std::to_string(cfg.probe_radii) + " radii");
  return r;
}

Report e4(const ExperimentConfig& cfg) {
  Report r;
  const auto opt = norm_options(cfg);
  CsvBlock block{"counterexample", {"p", "function", "functional", "value", "verdict", "decay_exponent"}, {}};
  auto row = [&](double p, const std::string& fn, const std::string& what, const NormEstimate& e) {
    block.add_row({num(p), fn, what, num(e.value_p_power), verdict_name(e.verdict()),
                   num(-std::log2(e.divergence->increment_ratio))});
  };
  {
    const double p = cfg.p;  // p > 2
    const auto ce = zoo::counterexample_h(cfg.alpha, p, cfg.epsilon);
    const auto f = norms::norm_radial(ce.f1b, {cfg.alpha, p}, opt);
    const auto g = norms::norm_radial(ce.gc, {cfg.alpha, p}, opt);
    const auto h = potential::rho(ce.h, {cfg.alpha, p}, opt);
    row(p, "f1b", "norm", f);
    row(p, "gc", "norm", g);
    row(p, "h", "rho", h);
    r.results["p_above_2"] = {{"p", p}, {"b", ce.b}, {"c", ce.c}, {"f1b", estimate_json(f)}, {"gc", estimate_json(g)},
                              {"rho_h", estimate_json(h)}};
    r.check("p > 2: f_{1,b} and g_c are finite but rho(f_{1,b} + g_c) diverges",
            f.verdict() == Verdict::converged && g.verdict() == Verdict::converged && h.verdict() == Verdict::diverged,
            {{"f1b", verdict_name(f.verdict())}, {"gc", verdict_name(g.verdict())}, {"rho_h", verdict_name(h.verdict())}},
            "probe verdicts");
  }
  {
    const double p = cfg.q;  // p < 2
    const auto ce = zoo::counterexample_h(cfg.alpha, p, cfg.epsilon);
    const auto f = norms::norm_radial(ce.f1b, {cfg.alpha, p}, opt);
    const auto h = potential::rho(ce.h, {cfg.alpha, p}, opt);
    row(p, "f1b", "norm", f);
    row(p, "h", "rho", h);
    r.results["p_below_2"] = {{"p", p}, {"b", ce.b}, {"c", ce.c}, {"f1b", estimate_json(f)}, {"rho_h", estimate_json(h)}};
    r.check("p < 2: f_{1,b} diverges while rho(h) is finite (h - g_c = f_{1,b})",
            f.verdict() == Verdict::diverged && h.verdict() == Verdict::converged,
            {{"f1b", verdict_name(f.verdict())}, {"rho_h", verdict_name(h.verdict())}}, "probe verdicts");
  }
  r.series.push_back(std::move(block));
  return r;
}

Report e5(const ExperimentConfig& cfg) {
  Report r;
  const auto opt = norm_options(cfg);
  const auto theta = zoo::make_atomic(cfg.sigma);
  const auto one = zoo::make_monomial(0);
  CsvBlock block{"atomic", {"alpha", "p", "rho", "rho_verdict", "criterion", "criterion_verdict"}, {}};
  bool ok = true;
  for (double alpha : {0.75, 0.25})
    for (double p : {cfg.p, cfg.q}) {
      const auto rho = potential::rho(theta, {alpha, p}, opt);
      const auto crit = potential::inner_divisor_criterion(theta, one, {alpha, p}, cfg.rel_tol);
      const Verdict want = alpha > 0.5 ? Verdict::converged : Verdict::diverged;
      ok = ok && rho.verdict() == want && crit.verdict() == want;
      block.add_row({num(alpha), num(p), num(rho.value_p_power), verdict_name(rho.verdict()), num(crit.value_p_power),
                     verdict_name(crit.verdict())});
    }
  r.series.push_back(block);
  r.check("atomic inner function: rho and the inner-divisor criterion finite at alpha = 0.75, infinite at 0.25", ok,
          Json::object(), "probe verdicts");

  bool same = true;
  Json trick = Json::array();
  for (double alpha : {0.75, 0.25}) {
    const auto t = potential::power_trick_check(theta, one, {alpha, cfg.p}, cfg.q, opt);
    same = same && t.same_verdict;
    trick.push_back({{"alpha", alpha}, {"lhs", estimate_json(t.lhs)}, {"rhs", estimate_json(t.rhs)}});
  }
  r.results["power_trick"] = std::move(trick);
  r.check("verdicts for the atomic function agree at p and q", same, {{"p", cfg.p}, {"q", cfg.q}}, "equal verdicts");
  return r;
}

Report e6(const ExperimentConfig& cfg) {
  Report r;
  const auto opt = norm_options(cfg);
  std::vector<std::pair<std::string, zoo::TestFunction>> thetas{
      {"blaschke(0.5,-0.7i)", zoo::make_blaschke({0.5, Complex(0.0, -0.7)})},
      {"atomic(" + num(cfg.sigma) + ")", zoo::make_atomic(cfg.sigma)}};
  std::vector<std::pair<std::string, zoo::TestFunction>> hs{
      {"powerouter(0.5)", zoo::make_power_outer(0.5)},
      {"outer(2+cos t)", zoo::make_outer_from_modulus([](double t) { return 2.0 + std::cos(t); })},
      {"fab(1,0.25)", zoo::make_fab({1.0, 0.25})}};
  CsvBlock block{"power_trick", {"theta", "h", "p", "q", "lhs", "lhs_verdict", "rhs", "rhs_verdict"}, {}};
  int same = 0, total = 0;
  for (const auto& [tn, theta] : thetas)
    for (const auto& [hn, h] : hs) {
      const auto t = potential::power_trick_check(theta, h, {cfg.alpha, cfg.p}, cfg.q, opt);
      ++total;
      same += t.same_verdict;
      block.add_row({tn, hn, num(cfg.p), num(cfg.q), num(t.lhs.value_p_power), verdict_name(t.lhs.verdict()),
                     num(t.rhs.value_p_power), verdict_name(t.rhs.verdict())});
    }
  r.series.push_back(std::move(block));
  r.check("Theta h in A^p iff Theta h^(p/q) in A^q on the battery", same == total,
          {{"same", same}, {"total", total}}, "equal verdicts");
  return r;
}

Report e7(const ExperimentConfig& cfg) {
  Report r;
  const auto coarse = carleson::default_scan_grid(cfg.scan_level);
  const auto fine = carleson::default_scan_grid(cfg.scan_level + 1);
  Json scans = Json::array();
  for (auto [gamma, s] : {std::pair{0.5, 0.0}, {0.5, 2.0}, {0.2, 1.5}}) {
    const auto a = carleson::ratio_scan(gamma, s, coarse.a, coarse.w, cfg.policy);
    const auto b = carleson::ratio_scan(gamma, s, fine.a, fine.w, cfg.policy);
    const std::string tag = "(" + num(gamma) + "," + num(s) + ")";
    double worst_spread = 0.0, worst_shift = 0.0;
    bool positive = true;
    for (const auto& e : b.entries) positive = positive && e.ratio > 0.0;
    Json regimes = Json::array();
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& x = a.regimes[k];
      const auto& y = b.regimes[k];
      worst_spread = std::max(worst_spread, y.max_ratio / y.min_ratio);
      worst_shift = std::max({worst_shift, std::abs(y.max_ratio / x.max_ratio - 1.0),
                              std::abs(y.min_ratio / x.min_ratio - 1.0)});
      regimes.push_back({{"regime", k + 1}, {"count", y.count}, {"min", y.min_ratio}, {"max", y.max_ratio},
                         {"coarse_min", x.min_ratio}, {"coarse_max", x.max_ratio}});
    }
    scans.push_back({{"gamma", gamma}, {"s", s}, {"regimes", regimes}, {"max_stretched_ratio", b.max_stretched_ratio}});
    r.check("all ratios positive and all regimes covered " + tag, positive && b.covers_all_regimes(),
            {{"entries", b.entries.size()}}, "strict");
    r.check("per-regime max/min of mu(S_w)/comparator " + tag, worst_spread <= 25.0, {{"worst", worst_spread}},
            "<= 25");
    r.check("per-regime extremes stable under grid doubling " + tag, worst_shift <= 0.2, {{"worst_shift", worst_shift}},
            "<= 20%");
    for (int k = 1; k <= 3; ++k) {
      CsvBlock block{"ratios_" + tag + "_regime" + std::to_string(k), {"abs_a", "abs_w", "arg_w", "regime", "ratio"}, {}};
      for (const auto& e : a.entries)
        if (e.regime == k)
          block.add_row({num(std::abs(e.a)), num(std::abs(e.w)), num(std::arg(e.w)), std::to_string(k), num(e.ratio)});
      r.series.push_back(std::move(block));
    }
  }
  r.results["ratio_scans"] = std::move(scans);

  // ARS testing condition for the conformal family (gamma, s) = (alpha, 2).
  const std::vector<Complex> a_grid{0.0, 0.3, 0.6, 0.8, 0.9, 0.95};
  const std::vector<Complex> w_grid{0.6, 0.7, 0.8, 0.9, 0.95, std::polar(0.9, 0.3)};
  const auto ars = carleson::ars_uniformity_scan(cfg.alpha, 2.0, cfg.alpha, a_grid, w_grid, cfg.seed, cfg.mc_samples,
                                                 cfg.policy);
  const double lo = *std::min_element(ars.max_by_a.begin(), ars.max_by_a.end());
  const double hi = *std::max_element(ars.max_by_a.begin(), ars.max_by_a.end());
  r.results["ars"] = {{"seed", ars.seed}, {"max_by_a", ars.max_by_a}, {"max_by_w", ars.max_by_w},
                      {"min_ratio", ars.min_ratio}, {"max_ratio", ars.max_ratio}};
  CsvBlock block{"ars", {"abs_a", "abs_w", "arg_w", "lhs", "lhs_error", "mu_w", "ratio"}, {}};
  for (const auto& e : ars.entries)
    block.add_row({num(std::abs(e.a)), num(std::abs(e.w)), num(std::arg(e.w)), num(e.lhs), num(e.lhs_error),
                   num(e.mu_w), num(e.ratio)});
  r.series.push_back(std::move(block));
  r.check("ARS ratio maxima over the a-grid vary by at most a factor 4", hi / lo <= 4.0,
          {{"min_row_max", lo}, {"max_row_max", hi}, {"factor", hi / lo}}, "<= 4");
  r.check("no growth trend of the ARS ratio toward |a| = 0.95", !ars.growth_in_a, {{"max_by_a", ars.max_by_a}},
          "row maxima not increasing by 50%");
  return r;
}

Report e8(const ExperimentConfig& cfg) {
  Report r;
  const auto opt = norm_options(cfg);
  const SpaceParams sp{cfg.alpha, cfg.p};
  std::vector<std::pair<std::string, zoo::TestFunction>> fs{
      {"e_1", zoo::make_monomial(1)}, {"e_3", zoo::make_monomial(3)}, {"fab(1,0.6)", zoo::make_fab({1.0, 0.6})}};
  const std::vector<double> radii{0.0, 0.3, 0.6, 0.9};
  CsvBlock block{"conformal", {"function", "abs_a", "norm_ratio", "I1", "area_norm", "I1_rel_error"}, {}};
  double band = 1.0, worst_i1 = 0.0;
  bool growth = false;
  for (const auto& [name, f] : fs) {
    const double base = norms::norm_radial(f, sp, opt).value_p_power;
    const double area = norms::norm_area(f, sp, opt).value_p_power;
    std::vector<double> ratios;
    for (double ar : radii) {
      const Complex a = ar;
      const double ta = norms::norm_radial(norms::apply_Ta(f, a, sp), sp, opt).value_p_power;
      const double ratio = std::pow(ta / base, 1.0 / sp.p);
      ratios.push_back(ratio);
      band = std::max({band, ratio, 1.0 / ratio});
      const auto d = norms::conformal_defect(f, a, sp, 1e-9);
      const double err = std::abs(d.I1 / area - 1.0);
      worst_i1 = std::max(worst_i1, err);
      block.add_row({name, num(ar), num(ratio), num(d.I1), num(area), num(err)});
    }
    growth = growth || growth_trend(ratios);
  }
  r.series.push_back(std::move(block));
  r.check("||T_a f|| / ||f|| within [1/C, C]", band <= 5.0, {{"C", band}}, "C <= 5");
  r.check("no monotone growth of ||T_a f|| / ||f|| in |a|", !growth, Json::object(), "not increasing by 50%");
  r.check("I1 equals the weighted area integral of f", worst_i1 <= 1e-4, {{"worst_rel_error", worst_i1}},
          "rel <= 1e-4");
  return r;
}

Report e9(const ExperimentConfig& cfg) {
  Report r;
  const auto opt = norm_options(cfg);
  const SpaceParams sp{cfg.alpha, cfg.p};
  const double b = 0.3, delta = 0.1;
  const double expo = 0.25 - cfg.alpha / 2.0;
  CsvBlock block{"fab_asymptotics", {"j", "norm", "model", "ratio"}, {}};
  double lo = INFINITY, hi = 0.0;
  for (int j = 1; j <= 8; ++j) {
    const auto n = norms::norm_radial(zoo::make_fab({double(j), j * b + delta}), sp, opt);
    const double norm = std::pow(n.value_p_power, 1.0 / sp.p);
    const double model = std::pow(double(j), expo) * std::exp2(j * b);
    const double ratio = norm / model;
    if (j >= 4) {
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    block.add_row({std::to_string(j), num(norm), num(model), num(ratio)});
  }
  r.series.push_back(std::move(block));
  r.check("||f_{j, jb + delta}|| / (j^(1/4 - alpha/2) 2^(jb)) stays in a factor-2 band for j >= 4", hi / lo <= 2.0,
          {{"min", lo}, {"max", hi}}, "max/min <= 2");
  return r;
}

Report e10(const ExperimentConfig& cfg) {
  Report r;
  const auto opt = norm_options(cfg);
  const auto h = zoo::make_outer_from_modulus([](double t) { return 2.0 + std::cos(t); });
  const auto hmin = zoo::truncate(h, zoo::TruncateMode::min);
  const auto hmax = zoo::truncate(h, zoo::TruncateMode::max);
  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  double worst = 0.0;
  CsvBlock block{"h_min_h_max", {"re", "im", "abs_error"}, {}};
  for (int k = 0; k < 20; ++k) {
    const Complex z = std::polar(0.95 * std::sqrt(uniform()), 2.0 * std::numbers::pi * uniform());
    const double err = std::abs(hmin.eval(z) * hmax.eval(z) - h.eval(z));
    worst = std::max(worst, err);
    block.add_row({num(z.real()), num(z.imag()), num(err)});
  }
  r.series.push_back(std::move(block));
  r.check("h_min h_max = h at 20 interior points", worst <= 1e-6, {{"worst_abs_error", worst}}, "<= 1e-6");

  // f = Theta h in A^p; then Theta h^(p/2) and h^(p/2) lie in A^2.
  const auto theta = zoo::make_blaschke({0.5, Complex(0.0, -0.7)});
  const auto f = zoo::combine(zoo::CombineOp::product, theta, h);
  const auto hp = zoo::power(h, cfg.p / 2.0);
  const auto left = zoo::combine(zoo::CombineOp::product, theta, hp);
  const auto rf = potential::rho(f, {cfg.alpha, cfg.p}, opt);
  const auto r1 = potential::rho(left, {cfg.alpha, 2.0}, opt);
  const auto r2 = potential::rho(hp, {cfg.alpha, 2.0}, opt);
  r.results["rho_theta_h"] = estimate_json(rf);
  r.results["rho_theta_h_half"] = estimate_json(r1);
  r.results["rho_h_half"] = estimate_json(r2);
  const bool premise = rf.verdict() == Verdict::converged;
  r.check("rho(Theta h) finite", premise, {{"rho", rf.value_p_power}}, "probe verdict");
  r.check("rho(Theta h^(p/2)) and rho(h^(p/2)) finite at p = 2",
          r1.verdict() == Verdict::converged && r2.verdict() == Verdict::converged,
          {{"rho_theta_h_half", r1.value_p_power}, {"rho_h_half", r2.value_p_power}}, "probe verdicts");
  return r;
}

const std::map<std::string, Report (*)(const ExperimentConfig&)>& registry() {
  static const std::map<std::string, Report (*)(const ExperimentConfig&)> m{
      {"E1", e1}, {"E2", e2}, {"E3", e3}, {"E4", e4}, {"E5", e5},
      {"E6", e6}, {"E7", e7}, {"E8", e8}, {"E9", e9}, {"E10", e10}};
  return m;
}

Json config_json(const ExperimentConfig& c) {
  return {{"id", c.id},           {"alpha", c.alpha},
          {"p", c.p},             {"q", c.q},
          {"epsilon", c.epsilon}, {"sigma", c.sigma},
          {"seed", c.seed},       {"probe_radii", c.probe_radii},
          {"rel_tol", c.rel_tol}, {"scan_level", c.scan_level},
          {"mc_samples", c.mc_samples}};
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10"};
  return ids;
}

ExperimentConfig default_config(const std::string& id) {
  if (!registry().count(id)) throw ConfigError("unknown experiment '" + id + "'");
  ExperimentConfig c;
  c.id = id;
  if (id == "E3" || id == "E8" || id == "E9") c.p = 2.0;
  if (id == "E4") {
    c.p = 4.0;  // the p > 2 case
    c.q = 1.0;  // the p < 2 case
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (!registry().count(id)) throw ConfigError("unknown experiment '" + id + "'");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError(id + ": alpha must lie in (0, 1)");
  if (!(p > 0.0) || !(q > 0.0)) throw ConfigError(id + ": p and q must be positive");
  if (!(sigma > 0.0)) throw ConfigError(id + ": sigma must be positive");
  if (probe_radii < 4 || probe_radii > 24) throw ConfigError(id + ": probe radii must lie in [4, 24]");
  if (!(rel_tol > 0.0 && rel_tol < 1e-3)) throw ConfigError(id + ": tolerance must lie in (0, 1e-3)");
  if (id == "E4") {
    if (!(p > 2.0)) throw ConfigError("E4: p must exceed 2 (the q case covers p < 2)");
    if (!(q < 2.0)) throw ConfigError("E4: q must be below 2");
    if (!(epsilon > 0.0 && epsilon < 1.0 - alpha)) throw ConfigError("E4: epsilon must lie in (0, 1 - alpha)");
  }
  if (id == "E7") {
    if (scan_level < 0 || scan_level > 3) throw ConfigError("E7: scan level must lie in [0, 3]");
    if (mc_samples < 10000) throw ConfigError("E7: at least 1e4 Monte-Carlo samples per point");
  }
}

Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Report r = registry().at(cfg.id)(cfg);
  r.experiment = cfg.id;
  r.config = config_json(cfg);
  return r;
}

}  // namespace dirlab::replicate
