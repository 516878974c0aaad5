#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dirlab/discgeom.hpp"
#include "dirlab/norms.hpp"
#include "dirlab/specfun.hpp"

using namespace dirlab;
using namespace dirlab::norms;
using doctest::Approx;

namespace {
// Gamma(alpha) Gamma(np/2 + 1) / Gamma(np/2 + alpha), computed directly from the Gamma function
double monomial_oracle(int n, double alpha, double p) {
  const double x = n * p / 2.0;
  return specfun::gamma(alpha) * specfun::gamma(x + 1.0) / specfun::gamma(x + alpha);
}
}  // namespace

TEST_CASE("norm_area") {
  // weight (1 - |z|^2)^alpha: 2 int_0^1 r (1 - r^2)^alpha dr = 1/(alpha + 1)
  for (double alpha : {0.5, 1.0}) {
    const auto e = norm_area(zoo::make_monomial(1), {alpha, 2.0});
    CHECK(e.value_p_power == Approx(1.0 / (alpha + 1.0)).epsilon(1e-8));
    CHECK(e.verdict() == quad::Verdict::converged);
  }
  CHECK(norm_area(zoo::make_polynomial({2.0}), {0.5, 2.0}).value_p_power == Approx(0.0));
}

TEST_CASE("norm_radial examples") {
  const SpaceParams sp{0.5, 2.0};
  const auto e1 = norm_radial(zoo::make_monomial(1), sp);
  CHECK(e1.value_p_power == Approx(2.0).epsilon(1e-8));
  CHECK(e1.verdict() == quad::Verdict::converged);
  const auto c = norm_radial(zoo::make_polynomial({Complex{0.0, 1.5}}), {0.5, 3.0});
  CHECK(c.value_p_power == Approx(std::pow(1.5, 3.0)).epsilon(1e-12));
  for (double p : {0.7, 2.0, 5.0})
    CHECK(norm_radial(zoo::make_monomial(3), {1.0, p}).value_p_power == Approx(1.0).epsilon(1e-7));
}

TEST_CASE("coefficient norm") {
  const Complex one[] = {1.0};
  const Complex z[] = {0.0, 1.0};
  const Complex onez[] = {1.0, 1.0};
  CHECK(norm_coeff_p2(one, 0.5) == Approx(1.0));
  CHECK(norm_coeff_p2(z, 0.5) == Approx(2.0).epsilon(1e-14));
  CHECK(norm_coeff_p2(onez, 0.5) == Approx(3.0).epsilon(1e-14));
}

TEST_CASE("monomial closed form") {
  for (double alpha : {0.3, 0.9})
    for (double p : {0.7, 3.0})
      for (int n : {1, 4}) {
        const double oracle = monomial_oracle(n, alpha, p);
        CHECK(monomial_norm_p_power(n, {alpha, p}) == Approx(oracle).epsilon(1e-12));
        CHECK(norm_radial(zoo::make_monomial(n), {alpha, p}).value_p_power == Approx(oracle).epsilon(1e-5));
      }
}

TEST_CASE("random polynomials against the coefficient norm") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g;
  for (double alpha : {0.25, 0.75}) {
    for (int k = 0; k < 3; ++k) {
      std::vector<Complex> c(9);
      for (auto& x : c) x = {g(rng), g(rng)};
      const auto f = zoo::make_polynomial(c);
      const double oracle = norm_coeff_p2(c, alpha);
      CHECK(norm_radial(f, {alpha, 2.0}).value_p_power == Approx(oracle).epsilon(1e-4));
    }
  }
}

TEST_CASE("apply_Ta") {
  const auto f = zoo::make_fab({1.0, 0.3});
  const auto t0 = apply_Ta(f, 0.0, {0.5, 0.5});  // alpha/p = 1
  for (Complex z : {Complex{0.2, 0.1}, Complex{-0.5, 0.4}})
    CHECK(std::abs(t0.eval(z)) == Approx(std::abs(f.eval(-z))).epsilon(1e-13));
  const Complex a{0.3, 0.5};
  const SpaceParams sp{0.5, 2.0};
  const auto t1 = apply_Ta(zoo::make_polynomial({1.0}), a, sp);
  const auto k = zoo::make_conformal_kernel(a, sp.alpha / sp.p, zoo::KernelVariant::normalized);
  for (Complex z : {Complex{0.0, 0.0}, Complex{0.6, -0.2}}) {
    const double expect = std::pow(std::abs(discgeom::mobius_derivs(a, z).first), sp.alpha / sp.p);
    CHECK(std::abs(t1.eval(z)) == Approx(expect).epsilon(1e-13));
    CHECK(std::abs(k.eval(z)) == Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("conformal defect") {
  const SpaceParams sp{0.5, 2.0};
  const auto e1 = zoo::make_monomial(1);
  const double area = norm_area(e1, sp).value_p_power;
  const auto d0 = conformal_defect(e1, 0.0, sp);
  CHECK(d0.I2 == 0.0);
  CHECK(d0.I1 == Approx(area).epsilon(1e-6));
  CHECK(conformal_defect(e1, 0.5, sp).I1 == Approx(area).epsilon(1e-4));
  CHECK(conformal_defect(zoo::make_polynomial({1.0}), 0.5, sp).I1 == Approx(0.0));
}

TEST_CASE("embedding check") {
  const auto r = embedding_check(zoo::make_monomial(3), {0.5, 1.0}, {1.0, 2.0});
  CHECK(r.rhs == Approx(monomial_oracle(3, 0.5, 1.0)).epsilon(1e-5));
  CHECK(r.lhs == Approx(std::sqrt(monomial_oracle(3, 1.0, 2.0))).epsilon(1e-5));
  CHECK(r.contractive);
  CHECK_THROWS_AS(embedding_check(zoo::make_monomial(3), {0.5, 1.0}, {0.7, 2.0}), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(norm_radial(zoo::make_monomial(1), {0.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(norm_radial(zoo::make_monomial(1), {0.5, -1.0}), std::invalid_argument);
}

TEST_CASE("property: area and radial forms are comparable") {
  const std::vector<zoo::TestFunction> battery{zoo::make_monomial(1), zoo::make_monomial(4),
                                               zoo::make_blaschke({0.5, Complex{0, -0.7}}), zoo::make_fab({1.0, 0.6})};
  for (double p : {1.0, 2.0}) {
    const SpaceParams sp{0.5, p};
    double lo = 1e300, hi = 0.0;
    for (const auto& f : battery) {
      const auto prof = density_profile(f, sp);
      const double ratio = (norm_area(prof).value_p_power + prof.f0_p) / norm_radial(prof).value_p_power;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo <= 10.0);
  }
}

TEST_CASE("property: contractive embeddings on a battery") {
  const std::vector<zoo::TestFunction> battery{zoo::make_monomial(2), zoo::make_blaschke({0.5}),
                                               zoo::make_fab({1.0, 0.6})};
  const std::pair<SpaceParams, SpaceParams> pairs[] = {
      {{0.5, 1.0}, {1.0, 2.0}}, {{0.3, 1.0}, {0.6, 2.0}}, {{0.25, 1.0}, {0.75, 3.0}}};
  for (const auto& f : battery)
    for (const auto& [from, to] : pairs) CHECK_MESSAGE(embedding_check(f, from, to).contractive, f.label());
}
