#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dirlab/specfun.hpp"

namespace sf = dirlab::specfun;
using sf::log_gamma, sf::gen_binomial, sf::besov_coeff, sf::radial_tail_weight;

using doctest::Approx;

TEST_CASE("gamma values") {
  CHECK(sf::gamma(1.0) == Approx(1.0).epsilon(1e-15));
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  // reflection: Gamma(1/2)^2 = pi
  CHECK(sf::gamma(0.5) * sf::gamma(0.5) == Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(sf::gamma(0.5) == Approx(1.7724538509055160).epsilon(1e-14));
  CHECK(sf::gamma(3.5) == Approx(2.5 * 1.5 * 0.5 * sqrt_pi).epsilon(1e-14));
}

TEST_CASE("gamma poles and overflow") {
  CHECK_THROWS_AS(sf::gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(sf::gamma(-1.0), std::domain_error);
  CHECK_THROWS_AS(sf::gamma(-7.0), std::domain_error);
  CHECK_THROWS_AS(sf::gamma(200.0), std::overflow_error);
  CHECK(sf::gamma(-0.5) == Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("log_gamma") {
  CHECK(log_gamma(1.0) == Approx(0.0));
  CHECK(log_gamma(2.0) == Approx(0.0));
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) sum += std::log(static_cast<double>(k));
  CHECK(log_gamma(101.0) == Approx(sum).epsilon(1e-13));
}

TEST_CASE("beta") {
  CHECK(sf::beta(1, 1) == Approx(1.0).epsilon(1e-14));
  CHECK(sf::beta(0.5, 0.5) == Approx(std::numbers::pi).epsilon(1e-14));
  // int_0^1 t (1-t)^2 dt
  CHECK(sf::beta(2, 3) == Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("gen_binomial and besov_coeff") {
  CHECK(gen_binomial(0.75, 0) == 1.0);
  CHECK(gen_binomial(1.0, 1) == 1.0);
  CHECK(gen_binomial(0.5, 2) == Approx(-0.125).epsilon(1e-15));
  CHECK(gen_binomial(3.0, 5) == 0.0);
  CHECK(besov_coeff(0.3, 0) == 1.0);
  for (unsigned n : {1u, 5u, 40u}) CHECK(besov_coeff(1.0, n) == Approx(1.0).epsilon(1e-13));
  CHECK(besov_coeff(0.5, 2) == Approx(0.375).epsilon(1e-14));
}

TEST_CASE("radial_tail_weight") {
  CHECK(radial_tail_weight(0.5, 1.0, 0.0) == 0.0);
  // alpha = 1: int_t^1 dr/r = -log t
  CHECK(radial_tail_weight(1.0, 0.3) == Approx(-std::log(0.3)).epsilon(1e-12));
  // alpha = 2: int_t^1 (1-r^2)/r dr = -log t - (1-t^2)/2
  const double t = 0.6;
  CHECK(radial_tail_weight(2.0, t) == Approx(-std::log(t) - 0.5 * (1 - t * t)).epsilon(1e-12));
}

TEST_CASE("property: gamma recurrence") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-3, 100.0);
  for (int i = 0; i < 500; ++i) {
    const double x = u(rng);
    const double g1 = sf::gamma(x + 1.0);
    CHECK(std::abs(g1 - x * sf::gamma(x)) / g1 <= 1e-11);
  }
}

TEST_CASE("property: beta symmetry") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(1e-3, 10.0);
  for (int i = 0; i < 400; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(std::abs(sf::beta(x, y) / sf::beta(y, x) - 1.0) <= 1e-12);
  }
}

TEST_CASE("property: binomial tail decay") {
  for (double p : {1.0, 3.0}) {
    double lo = 1e300, hi = 0.0;
    for (unsigned j = 10; j <= 1000; ++j) {
      const double v = std::pow(j, 1.0 + p / 2.0) * std::abs(gen_binomial(p / 2.0, j));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo <= 2.0);
  }
}
