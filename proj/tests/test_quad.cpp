#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dirlab/quad.hpp"
#include "dirlab/specfun.hpp"

using namespace dirlab;
using namespace dirlab::quad;
using doctest::Approx;

TEST_CASE("integrate_interval") {
  const auto one = integrate_interval([](double) { return 1.0; }, 0.0, 1.0, {1e-12, 0.0});
  CHECK(one.converged);
  CHECK(std::abs(one.value - 1.0) <= 1e-12);
  // arcsin antiderivative
  const auto as = integrate_interval([](double r) { return 1.0 / std::sqrt((1.0 - r) * (1.0 + r)); }, 0.0, 1.0, {1e-10, 0.0},
                                     {false, true});
  CHECK(as.value == Approx(std::numbers::pi / 2).epsilon(1e-8));
  // substitution u = 1 - r^2 gives 1/alpha
  const double alpha = 0.25;
  const auto sub = integrate_interval([&](double r) { return 2 * r * std::pow((1 - r) * (1 + r), alpha - 1); }, 0.0, 1.0,
                                      {1e-10, 0.0}, {false, true});
  CHECK(sub.value == Approx(4.0).epsilon(1e-7));
}

TEST_CASE("Gauss-Jacobi rules") {
  // weight (1 - x)^a (1 + x)^b on [-1, 1]; total mass 2^{a+b+1} B(a+1, b+1)
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.0}, std::pair{-0.5, 1.3}}) {
    const auto rule = gauss_jacobi(20, a, b);
    double mass = 0.0, m3 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      mass += rule.weights[i];
      m3 += rule.weights[i] * std::pow(rule.nodes[i], 3);
    }
    CHECK(mass == Approx(std::pow(2.0, a + b + 1) * specfun::beta(a + 1, b + 1)).epsilon(1e-12));
    // exact for polynomials: compare x^3 with adaptive quadrature of the weighted monomial
    const auto ref = integrate_interval([&](double x) { return x * x * x * std::pow(1 - x, a) * std::pow(1 + x, b); },
                                        -1.0, 1.0, {1e-12, 1e-14}, {b < 0, a < 0});
    CHECK(m3 == Approx(ref.value).epsilon(1e-9));
  }
  // int_0^1 r (1-r)^gamma dr = B(2, gamma + 1)
  const auto q = integrate_jacobi([](double r) { return r; }, 0.0, 1.0, 0.3);
  CHECK(q.converged);
  CHECK(q.value == Approx(specfun::beta(2.0, 1.3)).epsilon(1e-13));
}

TEST_CASE("integrate_circle") {
  const auto c = integrate_circle([](double) { return 2.5; }, 1e-12);
  CHECK(c.value == Approx(2.5).epsilon(1e-13));
  const double r = 0.7;
  const auto m = integrate_circle([&](double t) { return std::norm(std::polar(r, t)); }, 1e-12);
  CHECK(m.value == Approx(r * r).epsilon(1e-13));
  // M_2^2(r, e_3) = r^6 through integral means of |z^3|^2
  const auto e3 = integrate_circle([&](double t) { return std::norm(std::pow(std::polar(r, t), 3)); }, 1e-12);
  CHECK(e3.value == Approx(0.117649).epsilon(1e-12));
}

TEST_CASE("integrate_disc") {
  const auto one = integrate_disc([](Complex) { return 1.0; }, 0.0, {1e-10, 0.0});
  CHECK(one.value == Approx(1.0).epsilon(1e-10));
  // 2 int_0^1 r (1 - r)^(-1/2) dr = 2 B(2, 1/2) = 8/3
  const auto w = integrate_disc([](Complex) { return 1.0; }, -0.5, {1e-10, 0.0});
  CHECK(w.value == Approx(2.0 * specfun::beta(2.0, 0.5)).epsilon(1e-8));
  CHECK(w.value == Approx(8.0 / 3.0).epsilon(1e-8));
  const double alpha = 0.5;
  const auto d = integrate_disc([](Complex) { return 1.0; }, alpha, {1e-10, 0.0});
  CHECK(d.value == Approx(2.0 / ((alpha + 1) * (alpha + 2))).epsilon(1e-9));
}

TEST_CASE("divergence probe") {
  const auto F = [](Complex) { return 1.0; };
  const auto conv = divergence_probe(F, 0.0, 12);
  CHECK(conv.verdict == Verdict::converged);
  CHECK(std::abs(conv.fitted_exponent) < 0.05);

  const auto logd = divergence_probe(F, -1.0, 12);
  CHECK(logd.verdict == Verdict::diverged);
  CHECK(logd.log_divergence);
  // exact truncation: 2 int_0^R r/(1-r) dr = 2(-log(1-R) - R)
  for (std::size_t k = 0; k < logd.radii.size(); ++k) {
    const double R = logd.radii[k];
    CHECK(logd.truncated_values[k] == Approx(2.0 * (-std::log1p(-R) - R)).epsilon(1e-7));
  }

  const auto pw = divergence_probe(F, -1.5, 12);
  CHECK(pw.verdict == Verdict::diverged);
  CHECK_FALSE(pw.log_divergence);
  CHECK(pw.fitted_exponent == Approx(0.5).epsilon(0.1));
}

TEST_CASE("property: probe truncations are nondecreasing") {
  const auto F = [](Complex z) { return std::norm(z) + std::abs(std::sin(5 * z.real())); };
  for (double g : {0.0, -0.5, -1.2}) {
    const auto rep = divergence_probe(F, g, 12);
    for (std::size_t k = 1; k < rep.truncated_values.size(); ++k)
      CHECK(rep.truncated_values[k] >= rep.truncated_values[k - 1]);
  }
}

TEST_CASE("property: halving the tolerance stays within the error estimates") {
  const auto f = [](double x) { return std::pow(x, -0.3) * std::cos(7 * x); };
  const auto a = integrate_interval(f, 0.0, 1.0, {1e-8, 0.0}, {true, false});
  const auto b = integrate_interval(f, 0.0, 1.0, {5e-9, 0.0}, {true, false});
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(std::abs(a.value - b.value) <= a.abs_error_estimate + b.abs_error_estimate);
  const auto F = [](Complex z) { return std::norm(1.0 + z * z); };
  const auto d1 = integrate_disc(F, 0.5, {1e-8, 0.0});
  const auto d2 = integrate_disc(F, 0.5, {5e-9, 0.0});
  CHECK(std::abs(d1.value - d2.value) <= d1.abs_error_estimate + d2.abs_error_estimate);
}
