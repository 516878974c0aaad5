#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dirlab/potential.hpp"

using namespace dirlab;
using namespace dirlab::potential;
using doctest::Approx;

namespace {
Complex random_point(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(rmax * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}
}  // namespace

TEST_CASE("Poisson extension") {
  const auto one = BoundaryData::from_function([](double) { return 1.0; });
  PoissonOptions tight;
  tight.tol = 1e-13;
  for (Complex z : {Complex{0, 0}, Complex{0.5, 0.3}, Complex{-0.9, 0.0}})
    CHECK(poisson_extension(one, z, tight) == Approx(1.0).epsilon(1e-12));
  std::vector<double> s(64);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 + (i % 7);
  const auto g = BoundaryData::from_samples(s);
  CHECK(poisson_extension(g, 0.0) == Approx(g.mean()).epsilon(1e-14));
  // cos t extends to Re z
  const auto c = BoundaryData::from_function([](double t) { return 2.0 + std::cos(t); });
  CHECK(poisson_extension(c, Complex{0.6, 0.2}) == Approx(2.6).epsilon(1e-9));
}

TEST_CASE("Poisson extension refuses when the resolution budget is exceeded") {
  const auto fixed = BoundaryData::from_samples(std::vector<double>(64, 1.0));
  try {
    poisson_extension(fixed, Complex{1.0 - 1e-6, 0.0});
    FAIL("expected a ResolutionError");
  } catch (const ResolutionError& e) {
    CHECK(e.required_resolution() > 64);
  }
  CHECK_THROWS(BoundaryData::from_samples(std::vector<double>(48, 1.0)));
  CHECK_THROWS(BoundaryData::from_samples(std::vector<double>(64, -1.0)));
}

TEST_CASE("Green function") {
  const Complex z{0.3, 0.2}, w{-0.1, 0.6};
  CHECK(green(z, w) == Approx(green(w, z)).epsilon(1e-14));
  CHECK(green(0.0, 0.5) == Approx(-std::log(0.5)).epsilon(1e-14));
  CHECK(std::abs(green(z, std::polar(1.0, 0.7))) < 1e-14);
  CHECK_THROWS(green(z, z));
}

TEST_CASE("Green weight potential") {
  // w = 0: int -log|z| (1 - |z|^2)^(alpha - 2) dA by quadrature
  const double alpha = 0.5;
  const auto q = quad::integrate_interval(
      [&](double r) { return -2.0 * r * std::log(r) * std::pow(1.0 + r, alpha - 2.0) * std::pow(1.0 - r, alpha - 2.0); },
      0.0, 1.0, {1e-11, 0.0}, {true, true});
  CHECK(green_weight_potential(0.0, alpha) == Approx(q.value).epsilon(1e-7));
  // comparable to (1 - |w|)^alpha
  double lo = 1e300, hi = 0.0;
  for (double r = 0.0; r <= 0.95; r += 0.05) {
    const double v = green_weight_potential(std::polar(r, 1.0), alpha) / std::pow(1.0 - r, alpha);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo < 10.0);
}

TEST_CASE("Riesz defect") {
  const auto c = zoo::make_polynomial({2.0});
  for (auto route : {Route::poisson, Route::green}) {
    CHECK(std::abs(riesz_defect(c, 1.5, Complex{0.3, 0.1}, route).value) < 1e-12);
    // u = |z|^2: P_z(1) - |z|^2
    const auto e1 = zoo::make_monomial(1);
    CHECK(riesz_defect(e1, 2.0, 0.0, route).value == Approx(1.0).epsilon(1e-9));
    CHECK(riesz_defect(e1, 2.0, 0.5, route).value == Approx(0.75).epsilon(1e-9));
  }
}

TEST_CASE("property: Poisson and Green routes agree") {
  const std::vector<zoo::TestFunction> smooth{zoo::make_fab({1.0, 0.6}), zoo::make_monomial(3),
                                              zoo::make_power_outer(0.5, 1.0)};
  std::mt19937_64 rng(61);
  for (const auto& f : smooth)
    for (int i = 0; i < 5; ++i) {
      const Complex z = random_point(rng, 0.8);
      const double a = riesz_defect(f, 3.0, z, Route::poisson).value;
      const double b = riesz_defect(f, 3.0, z, Route::green).value;
      CHECK_MESSAGE(std::abs(a - b) <= 1e-4 * std::abs(a), f.label());
    }
}

TEST_CASE("property: defect is nonnegative") {
  const std::vector<zoo::TestFunction> catalog{zoo::make_monomial(2), zoo::make_blaschke({0.5, Complex{0.2, -0.6}}),
                                               zoo::make_fab({1.0, 0.4}), zoo::make_atomic(1.0)};
  std::mt19937_64 rng(67);
  for (const auto& f : catalog)
    for (int i = 0; i < 25; ++i) CHECK(riesz_defect(f, 2.0, random_point(rng, 0.95), Route::poisson).value >= -1e-9);
}

TEST_CASE("property: inner factor identity") {
  const auto theta = zoo::make_blaschke({0.4, Complex{-0.2, 0.5}});
  const auto f = zoo::make_fab({1.0, 0.6});
  const auto tf = zoo::combine(zoo::CombineOp::product, theta, f);
  std::mt19937_64 rng(71);
  for (double p : {1.0, 2.0, 3.0})
    for (int i = 0; i < 5; ++i) {
      const Complex z = random_point(rng, 0.8);
      const double lhs = riesz_defect(tf, p, z, Route::poisson).value - riesz_defect(f, p, z, Route::poisson).value;
      const double rhs = (1.0 - std::pow(std::abs(theta.eval(z)), p)) * std::pow(std::abs(f.eval(z)), p);
      CHECK(lhs == Approx(rhs).epsilon(1e-6));
    }
}

TEST_CASE("rho") {
  CHECK(rho(zoo::make_polynomial({3.0}), {0.5, 2.0}).value_p_power == Approx(0.0));
  // (1 - alpha) rho = ||f||^p - mean of |f|^p on the circle: (2 - 1)/(1/2)
  const auto r = rho(zoo::make_monomial(1), {0.5, 2.0});
  CHECK(r.verdict() == quad::Verdict::converged);
  CHECK(r.value_p_power == Approx(2.0).epsilon(1e-6));
  CHECK(inner_divisor_criterion(zoo::make_blaschke({}), zoo::make_monomial(2), {0.5, 2.0}).value_p_power ==
        Approx(0.0));
}
