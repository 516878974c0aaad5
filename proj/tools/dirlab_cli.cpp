// dirlab: norms, rho and Carleson box quantities from the command line, and
// the experiment battery. Exit status: 0 all assertions pass, 1 an assertion
// failed, 2 bad configuration.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "dirlab/carleson.hpp"
#include "dirlab/experiments.hpp"
#include "dirlab/norms.hpp"
#include "dirlab/potential.hpp"
#include "dirlab/report.hpp"
#include "dirlab/spec_parser.hpp"

using namespace dirlab;
using namespace dirlab::replicate;

namespace {

struct Common {
  double alpha = 0.5;
  double p = 2.0;
  std::optional<double> q;
  double tol = 1e-10;
  int radii = 12;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out;
  bool serial = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--alpha", c.alpha, "weight exponent in (0, 1)");
  app->add_option("--p", c.p, "integrability exponent");
  app->add_option("--tol", c.tol, "relative tolerance per shell");
  app->add_option("--radii", c.radii, "probe radii 1 - 2^-k")->check(CLI::Range(4, 24));
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", c.out, "output file (default stdout)");
  app->add_flag("--serial", c.serial, "run the serial reference kernels");
}

norms::NormOptions options(const Common& c) {
  norms::NormOptions opt;
  opt.rel_tol = c.tol;
  opt.probe_radii = c.radii;
  opt.policy = c.serial ? ExecPolicy::serial : ExecPolicy::openmp;
  return opt;
}

Json estimate_json(const norms::NormEstimate& e) {
  Json j{{"method", norms::to_string(e.method)},
         {"value_p_power", e.value_p_power},
         {"verdict", quad::to_string(e.verdict())},
         {"abs_error_estimate", e.quad.abs_error_estimate},
         {"evaluations", e.quad.evaluations}};
  if (e.divergence) {
    j["radii"] = e.divergence->radii;
    j["truncations"] = e.divergence->truncated_values;
  }
  return j;
}

int emit(const std::vector<Report>& reports, const Common& c) {
  const auto fmt = parse_format(c.format);
  if (c.out.empty())
    std::cout << (fmt == Format::json ? to_json(reports) : to_csv(reports));
  else
    emit_report(reports, fmt, c.out);
  for (const auto& r : reports)
    if (!r.all_passed()) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for A^p_alpha spaces in the Dirichlet range"};
  app.require_subcommand(1);

  Common nc, rc, cc, ec;
  std::string norm_fn, rho_fn;

  auto* norm = app.add_subcommand("norm", "norm of a function (radial and area forms)");
  add_common(norm, nc);
  norm->add_option("--function", norm_fn, "function spec, e.g. fab:1:0.25")->required();

  auto* rho = app.add_subcommand("rho", "the Riesz-defect functional rho");
  add_common(rho, rc);
  rho->add_option("--function", rho_fn, "function spec")->required();
  rho->add_option("--q", rc.q, "also run the power-trick check at exponent q (inner times outer only)");

  auto* carl = app.add_subcommand("carleson", "box measures and ratio scans");
  add_common(carl, cc);
  double gamma = 0.5, s = 2.0;
  std::string a_text = "0", w_text = "0.9";
  int scan = -1;
  carl->add_option("--gamma", gamma, "radial exponent of the measure");
  carl->add_option("--s", s, "kernel exponent of the measure");
  carl->add_option("--a", a_text, "kernel point, complex literal");
  carl->add_option("--w", w_text, "box point, complex literal");
  carl->add_option("--scan", scan, "run the ratio scan on the grid of this level instead")->check(CLI::Range(0, 3));

  auto* exp = app.add_subcommand("experiment", "run experiments E1..E10 (or 'all')");
  add_common(exp, ec);
  std::vector<std::string> ids;
  std::optional<double> e_alpha, e_p, e_eps, e_sigma;
  std::optional<long> samples;
  exp->add_option("ids", ids, "experiment ids")->required();
  exp->add_option("--q", ec.q, "second exponent");
  exp->add_option("--epsilon", e_eps, "E4 epsilon");
  exp->add_option("--sigma", e_sigma, "atomic mass");
  exp->add_option("--seed", ec.seed, "seed for random grids and Monte Carlo");
  exp->add_option("--samples", samples, "Monte-Carlo samples per ARS point");
  // --alpha/--p/--tol/--radii for experiments override only when given.

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*norm) {
      const auto f = parse_function_spec(norm_fn);
      const norms::SpaceParams sp{nc.alpha, nc.p};
      sp.validate();
      Report r;
      r.experiment = "norm";
      r.config = {{"function", norm_fn}, {"alpha", nc.alpha}, {"p", nc.p}, {"tol", nc.tol}, {"radii", nc.radii}};
      r.results["radial"] = estimate_json(norms::norm_radial(f, sp, options(nc)));
      if (f.coefficients() && nc.p == 2.0) r.results["coefficient"] = norms::norm_coeff_p2(*f.coefficients(), nc.alpha);
      return emit({r}, nc);
    }
    if (*rho) {
      const auto f = parse_function_spec(rho_fn);
      const norms::SpaceParams sp{rc.alpha, rc.p};
      Report r;
      r.experiment = "rho";
      r.config = {{"function", rho_fn}, {"alpha", rc.alpha}, {"p", rc.p}, {"tol", rc.tol}, {"radii", rc.radii}};
      r.results["rho"] = estimate_json(potential::rho(f, sp, options(rc)));
      return emit({r}, rc);
    }
    if (*carl) {
      Report r;
      r.experiment = "carleson";
      r.config = {{"gamma", gamma}, {"s", s}};
      const auto policy = cc.serial ? ExecPolicy::serial : ExecPolicy::openmp;
      if (scan >= 0) {
        const auto g = carleson::default_scan_grid(scan);
        const auto sc = carleson::ratio_scan(gamma, s, g.a, g.w, policy);
        r.config["scan_level"] = scan;
        Json regimes = Json::array();
        for (const auto& x : sc.regimes)
          regimes.push_back({{"regime", x.regime}, {"count", x.count}, {"min", x.min_ratio}, {"max", x.max_ratio}});
        r.results["regimes"] = regimes;
        r.results["max_stretched_ratio"] = sc.max_stretched_ratio;
        CsvBlock block{"ratios", {"abs_a", "abs_w", "arg_w", "regime", "ratio"}, {}};
        for (const auto& e : sc.entries)
          block.add_row({format_number(std::abs(e.a)), format_number(std::abs(e.w)), format_number(std::arg(e.w)),
                         std::to_string(e.regime), format_number(e.ratio)});
        r.series.push_back(std::move(block));
      } else {
        const carleson::BoxMeasureParams P{gamma, s, parse_complex(a_text)};
        const Complex w = parse_complex(w_text);
        P.validate();
        const auto mu = carleson::mu_box(P, w, false);
        const auto wide = carleson::mu_box(P, w, true);
        const double comp = carleson::mu_comparator(P, w);
        r.config["a"] = a_text;
        r.config["w"] = w_text;
        r.results = {{"mu_box", mu.value},          {"mu_box_error", mu.abs_error_estimate},
                     {"mu_stretched", wide.value},  {"comparator", comp},
                     {"ratio", mu.value / comp},    {"regime", carleson::regime(P.a, w)}};
      }
      return emit({r}, cc);
    }
    if (*exp) {
      if (ids.size() == 1 && ids[0] == "all") ids = experiment_ids();
      std::vector<Report> reports;
      for (const auto& id : ids) {
        auto cfg = default_config(id);
        if (exp->count("--alpha")) cfg.alpha = ec.alpha;
        if (exp->count("--p")) cfg.p = ec.p;
        if (ec.q) cfg.q = *ec.q;
        if (e_eps) cfg.epsilon = *e_eps;
        if (e_sigma) cfg.sigma = *e_sigma;
        if (ec.seed) cfg.seed = *ec.seed;
        if (samples) cfg.mc_samples = *samples;
        if (exp->count("--tol")) cfg.rel_tol = ec.tol;
        if (exp->count("--radii")) cfg.probe_radii = ec.radii;
        cfg.policy = ec.serial ? ExecPolicy::serial : ExecPolicy::openmp;
        cfg.validate();
        reports.push_back(run_experiment(cfg));
        std::fprintf(stderr, "%s: %s\n", id.c_str(), reports.back().all_passed() ? "pass" : "FAIL");
      }
      return emit(reports, ec);
    }
  } catch (const SpecError& e) {
    std::fprintf(stderr, "function spec: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {  // includes ConfigError
    std::fprintf(stderr, "configuration: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
