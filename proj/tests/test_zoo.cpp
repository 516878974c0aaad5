#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dirlab/zoo.hpp"

using namespace dirlab;
using namespace dirlab::zoo;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

Complex random_point(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(rmax * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

double max_pointwise_gap(const TestFunction& f, const TestFunction& g, int n, std::uint64_t seed, double rmax = 0.9) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex z = random_point(rng, rmax);
    const Complex a = f.eval(z), b = g.eval(z);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  return worst;
}
}  // namespace

TEST_CASE("monomials") {
  const auto e0 = make_monomial(0);
  CHECK(std::abs(e0.eval(Complex{0.3, 0.2}) - 1.0) < 1e-15);
  CHECK(e0.structure() == Structure::inner);
  CHECK(e0.known_zeros().empty());
  const auto e1 = make_monomial(1);
  CHECK(std::abs(e1.eval(0.5) - 0.5) < 1e-15);
  CHECK(std::abs(e1.deriv(Complex{0.1, 0.7}) - 1.0) < 1e-15);
  const auto e5 = make_monomial(5);
  for (double t : {0.0, 1.0, 2.5, -2.0}) CHECK(e5.boundary_modulus(t) == Approx(1.0).epsilon(1e-14));
  CHECK_THROWS(make_monomial(-1));
}

TEST_CASE("f_{a,b}") {
  CHECK(std::abs(make_fab({0, 0}).eval(Complex{0.4, -0.3}) - 1.0) < 1e-15);
  CHECK(std::abs(make_fab({1.7, 0.4}).eval(0.0) - std::exp(-1.7)) < 1e-15);
  CHECK(std::abs(make_fab({1, 1}).eval(0.5)) == Approx(0.5 * std::exp(-3.0)).epsilon(1e-14));
}

TEST_CASE("power outer functions") {
  CHECK(std::abs(make_power_outer(0.0, 2.5).eval(Complex{0.2, 0.2}) - 2.5) < 1e-14);
  const auto g = make_power_outer(1.0, 1.0);
  CHECK(std::abs(g.eval(0.0) - 1.0) < 1e-15);
  CHECK(std::abs(g.deriv(Complex{0.3, -0.5}) + 1.0) < 1e-14);
  CHECK(make_power_outer(0.7, 3.0).boundary_modulus(kPi) == Approx(3.0 * std::pow(2.0, 0.7)).epsilon(1e-13));
}

TEST_CASE("Blaschke products") {
  CHECK(std::abs(make_blaschke({}).eval(Complex{0.5, 0.1}) - 1.0) < 1e-15);
  const auto b0 = make_blaschke({Complex{0, 0}});
  for (Complex z : {Complex{0.3, 0.1}, Complex{-0.6, 0.2}}) CHECK(std::abs(std::abs(b0.eval(z)) - std::abs(z)) < 1e-15);
  const auto b = make_blaschke({0.5});
  double worst = 0.0;
  for (int k = 0; k < 64; ++k) worst = std::max(worst, std::abs(std::abs(b.eval(std::polar(1.0, 2 * kPi * k / 64))) - 1.0));
  CHECK(worst <= 1e-12);
  CHECK_THROWS(make_blaschke({Complex{1.0, 0.0}}));
}

TEST_CASE("atomic inner function") {
  const double sigma = 0.8;
  const auto s = make_atomic(sigma);
  CHECK(std::abs(s.eval(0.0) - std::exp(-sigma)) < 1e-15);
  for (double t : {0.3, 1.0, 3.0, -2.0}) CHECK(s.boundary_modulus(t) == Approx(1.0).epsilon(1e-12));
  const auto f = make_fab({sigma, 0.0});
  CHECK(max_pointwise_gap(s, f, 50, 21) <= 1e-14);
}

TEST_CASE("conformal kernels") {
  CHECK(std::abs(make_conformal_kernel(0.0, 0.7).eval(Complex{0.3, 0.3}) - 1.0) < 1e-14);
  CHECK(std::abs(make_conformal_kernel(0.5, 1.0).eval(0.0) - 0.75) < 1e-14);
  const auto k = make_conformal_kernel(0.9, 0.5, KernelVariant::plain);
  CHECK(std::abs(k.eval(0.9)) == Approx(std::pow(1.0 - 0.81, -0.5)).epsilon(1e-13));
}

TEST_CASE("outer functions from a boundary modulus") {
  const auto one = make_outer_from_modulus([](double) { return 1.0; });
  CHECK(std::abs(one.eval(Complex{0.4, 0.4}) - 1.0) < 1e-12);
  const auto c = make_outer_from_modulus([](double) { return 3.0; });
  CHECK(std::abs(c.eval(0.0)) == Approx(3.0).epsilon(1e-12));
  // geometric mean of |1 - e^{it}| is 1 (Jensen); the boundary zero slows the grid to O(1/N)
  const auto w = make_outer_from_modulus([](double t) { return std::abs(1.0 - std::polar(1.0, t)); }, 4096,
                                         "1 - z", 1e-5);
  CHECK(std::abs(w.eval(0.0)) == Approx(1.0).epsilon(1e-4));
  for (Complex z : {Complex{0.3, 0.2}, Complex{-0.5, 0.1}})
    CHECK(std::abs(w.eval(z)) == Approx(std::abs(1.0 - z)).epsilon(1e-4));
  CHECK_THROWS(make_outer_from_modulus([](double) { return -1.0; }));
}

TEST_CASE("truncations") {
  const auto small = make_outer_from_modulus([](double t) { return 0.5 + 0.25 * std::cos(t); });
  const auto hmin = truncate(small, TruncateMode::min);
  const auto hmax = truncate(small, TruncateMode::max);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const Complex z = random_point(rng, 0.9);
    CHECK(std::abs(hmin.eval(z) - small.eval(z)) < 1e-10);
    CHECK(std::abs(hmax.eval(z) - 1.0) < 1e-10);
  }
  const auto one = make_outer_from_modulus([](double) { return 1.0; });
  CHECK(std::abs(truncate(one, TruncateMode::min).eval(0.3) - 1.0) < 1e-12);
  CHECK(std::abs(truncate(one, TruncateMode::max).eval(0.3) - 1.0) < 1e-12);
}

TEST_CASE("truncations multiply back when the modulus crosses 1") {
  for (auto m : {+[](double t) { return 2.0 + std::cos(t); }, +[](double t) { return 1.0 + 0.8 * std::sin(t); }}) {
    const auto h = make_outer_from_modulus(m, 1024);
    const auto prod = combine(CombineOp::product, truncate(h, TruncateMode::min), truncate(h, TruncateMode::max));
    std::mt19937_64 rng(29);
    for (int i = 0; i < 20; ++i) {
      const Complex z = random_point(rng, 0.9);
      CHECK(std::abs(prod.eval(z) - h.eval(z)) <= 1e-6);
    }
  }
}

TEST_CASE("algebra") {
  const auto f = make_fab({0.7, 0.3});
  CHECK(max_pointwise_gap(combine(CombineOp::sum, f, make_polynomial({0.0})), f, 20, 31) <= 1e-15);
  CHECK(max_pointwise_gap(power(f, 1.0), f, 20, 37) <= 1e-14);
  for (int j : {2, 3, 5}) {
    const double b = 0.4;
    CHECK(max_pointwise_gap(power(make_fab({1.0, b}), j), make_fab({double(j), j * b}), 30, 41 + j) <= 1e-12);
  }
}

TEST_CASE("counterexample parameters") {
  const auto c4 = counterexample_h(0.5, 4.0, 0.25);
  CHECK(c4.c == Approx(-1.0 / 16.0).epsilon(1e-14));
  CHECK(c4.b == Approx(1.0 / 16.0).epsilon(1e-14));
  const auto c1 = counterexample_h(0.5, 1.0, 0.25);
  CHECK(c1.b == Approx(0.0).epsilon(1e-14));
  CHECK(c1.c == Approx(-0.25).epsilon(1e-14));
  for (const auto& c : {c4, c1}) {
    CHECK(std::abs(c.h.eval(0.0)) > 0.0);
    CHECK(std::abs(c.h.eval(0.0) - (std::exp(-1.0) + std::pow(2.0, c.b - c.c))) < 1e-12);
  }
  CHECK_THROWS(counterexample_h(0.5, 2.0, 0.25));
}

TEST_CASE("property: derivatives match finite differences") {
  const std::vector<TestFunction> catalog{
      make_monomial(3),
      make_polynomial({1.0, Complex{0.5, -0.2}, 0.0, 0.3}),
      make_fab({1.0, 0.25}),
      make_power_outer(-0.3, 2.0),
      make_blaschke({0.5, Complex{0, -0.7}}),
      make_atomic(1.0),
      make_conformal_kernel(Complex{0.3, 0.4}, 0.75),
      make_outer_from_modulus([](double t) { return 2.0 + std::cos(t); }),
      counterexample_h(0.5, 4.0, 0.25).h,
  };
  std::mt19937_64 rng(43);
  for (const auto& f : catalog) {
    for (int i = 0; i < 50; ++i) {
      const Complex z = random_point(rng, 0.9);
      const double h = 1e-5;
      const Complex fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
      const Complex d = f.deriv(z);
      CHECK_MESSAGE(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)), f.label());
    }
  }
}

TEST_CASE("property: inner functions") {
  const std::vector<TestFunction> inner{make_monomial(4), make_blaschke({0.5, Complex{0.1, 0.8}, -0.3}), make_atomic(1.5)};
  std::mt19937_64 rng(47);
  for (const auto& f : inner) {
    CHECK(f.structure() == Structure::inner);
    for (int k = 1; k < 256; ++k) CHECK(f.boundary_modulus(2 * kPi * k / 256) == Approx(1.0).epsilon(1e-10));
    for (int i = 0; i < 200; ++i) CHECK(std::abs(f.eval(random_point(rng, 0.999))) <= 1.0 + 1e-14);
  }
}

TEST_CASE("property: power algebra") {
  const auto f = make_fab({0.6, 0.2});
  for (auto [s, t] : {std::pair{0.5, 1.5}, std::pair{0.3, 0.7}, std::pair{2.0, -1.0}}) {
    const auto lhs = combine(CombineOp::product, power(f, s), power(f, t));
    CHECK(max_pointwise_gap(lhs, power(f, s + t), 40, 53) <= 1e-12);
  }
}
