// Acceptance run: one line per criterion, computed through the experiment
// battery. Criteria listed with --known-failure are still reported as FAIL;
// the exit status is 0 only when the failing set equals the declared set.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dirlab/experiments.hpp"

using namespace dirlab::replicate;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::string experiment;
  std::function<bool(const Assertion&)> selects;  // which assertions of the experiment count
  double time_limit = 0.0;                        // seconds, 0 = none
};

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

auto any() {
  return [](const Assertion&) { return true; };
}
auto with(std::vector<std::string> parts) {
  return [parts](const Assertion& a) {
    for (const auto& p : parts)
      if (contains(a.claim, p)) return true;
    return false;
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> known;
  app.add_option("--known-failure", known, "criterion expected to fail (reported, not fatal)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "monomial norms match the Gamma closed form", "E1", with({"matches the Gamma closed form"}), 60.0},
      {2, "||e_5|| is not increasing in p", "E1", with({"||e_5||", "quadrature cross-check"})},
      {3, "p = 2 quadrature equals the coefficient norm", "E2", with({"p = 2 quadrature norm"})},
      {4, "rho and norm verdicts agree, c2/c1 <= 50", "E2", with({"rho verdict equals", "equivalence constants"})},
      {5, "f_{1,b} convergence threshold at b = 1/2 - alpha", "E3", any(), 180.0},
      {6, "counterexample h for p = 4 and p = 1", "E4", any()},
      {7, "atomic inner threshold at alpha = 1/2, p-independent", "E5", any()},
      {8, "conformal invariance of the norm, I1 identity", "E8", any()},
      {9, "box measures comparable to the comparator per regime", "E7",
       [](const Assertion& a) { return !contains(a.claim, "ARS"); }, 300.0},
      {10, "ARS ratio uniform in a (factor 4, no growth)", "E7", with({"ARS"})},
      {11, "h_min h_max = h and the square-root witness", "E10", any()},
      {12, "f_{j, jb + delta} norm band for j = 4..8", "E9", any()},
  };

  std::map<std::string, Report> reports;
  std::map<std::string, double> seconds;
  for (const auto& c : criteria) {
    if (reports.count(c.experiment)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    reports.emplace(c.experiment, run_experiment(default_config(c.experiment)));
    seconds[c.experiment] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  std::set<int> failed;
  for (const auto& c : criteria) {
    const auto& r = reports.at(c.experiment);
    int used = 0;
    bool ok = true;
    std::string detail;
    for (const auto& a : r.assertions) {
      if (!c.selects(a)) continue;
      ++used;
      if (!a.passed) {
        ok = false;
        detail += " [" + a.claim + ": " + a.numbers.dump() + "]";
      }
    }
    if (used == 0) {
      ok = false;
      detail += " [no assertions recorded]";
    }
    // the time limit applies to the whole experiment, which may cover more than this criterion
    if (c.time_limit > 0.0 && seconds[c.experiment] > c.time_limit) {
      ok = false;
      detail += " [runtime " + std::to_string(seconds[c.experiment]) + " s]";
    }
    if (!ok) failed.insert(c.id);
    std::printf("criterion %2d: %s  %s (%s, %.1f s)%s\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(),
                c.experiment.c_str(), seconds[c.experiment], detail.c_str());
  }

  const std::set<int> expected(known.begin(), known.end());
  std::printf("%zu of %zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
  if (failed != expected) {
    for (int id : failed)
      if (!expected.count(id)) std::printf("unexpected failure: criterion %d\n", id);
    for (int id : expected)
      if (!failed.count(id)) std::printf("declared failure now passes: criterion %d\n", id);
    return 1;
  }
  if (!expected.empty()) std::printf("failures match the declared known failures\n");
  return 0;
}
