#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dirlab/discgeom.hpp"

using namespace dirlab;
using namespace dirlab::discgeom;
using doctest::Approx;

namespace {
Complex random_point(std::mt19937_64& rng, double rmax = 0.99) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(rmax * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}
}  // namespace

TEST_CASE("mobius examples") {
  const Complex a{0.3, -0.4};
  CHECK(std::abs(mobius(a, 0.0) - a) < 1e-15);
  CHECK(std::abs(mobius(a, a)) < 1e-15);
  CHECK(mobius(0.5, 0.25).real() == Approx(0.25 / 0.875).epsilon(1e-14));
}

TEST_CASE("mobius derivatives") {
  const auto d0 = mobius_derivs(0.0, Complex{0.2, 0.1});
  CHECK(std::abs(d0.first + 1.0) < 1e-15);
  CHECK(std::abs(d0.second) < 1e-15);
  CHECK(mobius_derivs(0.5, 0.0).first.real() == Approx(-0.75));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Complex a = random_point(rng), z = random_point(rng);
    const double lhs = std::abs(mobius_derivs(a, z).first) * (1.0 - std::norm(z));
    CHECK(std::abs(lhs - (1.0 - std::norm(mobius(a, z)))) < 1e-13);
  }
}

TEST_CASE("deriv_power") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Complex a = random_point(rng, 0.95), z = random_point(rng, 0.95);
    const double s = 0.1 + 2.0 * (i % 10) / 10.0;
    const double expect = std::pow(std::abs(mobius_derivs(a, z).first), s);
    CHECK(std::abs(std::abs(deriv_power(a, z, s)) / expect - 1.0) < 1e-13);
  }
  const double s = 0.37;
  CHECK(std::abs(deriv_power(0.0, Complex{0.4, 0.2}, s) - std::polar(1.0, std::numbers::pi * s)) < 1e-14);
  CHECK(std::abs(deriv_power(0.5, 0.0, 1.0) - mobius_derivs(0.5, 0.0).first) < 1e-14);
}

TEST_CASE("box membership") {
  const BoxSpec b{Complex{0.9, 0.0}};
  CHECK(box_contains(b, b.anchor, false));
  CHECK_FALSE(box_contains(b, Complex{0.8, 0.0}, false));
  CHECK(box_contains(b, Complex{0.8, 0.0}, true));
  const BoxSpec half{Complex{0.5, 0.0}};
  CHECK(box_is_annulus(half));
  for (double t : {0.0, 1.0, 3.0, -3.1})
    for (double r : {0.5, 0.7, 0.99}) CHECK(box_contains(half, std::polar(r, t), false));
  CHECK(box_inner_radius(BoxSpec{Complex{0.2, 0}}, true) == 0.0);
}

TEST_CASE("max_estimate against |1 - conj(a) z|") {
  CHECK(max_estimate(0.0, 0.0) == Approx(1.0));
  CHECK(max_estimate(0.0, Complex{0.3, 0.6}) == Approx(1.0));
  double lo = 1e300, hi = 0.0;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20000; ++i) {
    const Complex a = random_point(rng, 0.999), z = random_point(rng, 0.999);
    const double ratio = max_estimate(a, z) / std::abs(1.0 - std::conj(a) * z);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo <= 10.0);
}

TEST_CASE("property: involution and conformal weight identity") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const Complex a = random_point(rng, 0.95), z = random_point(rng, 0.95);
    CHECK(std::abs(mobius(a, mobius(a, z)) - z) < 1e-13);
    const Complex w = mobius(a, z);
    const double lhs = (1.0 - std::norm(w)) / std::abs(mobius_derivs(a, z).first);
    CHECK(std::abs(lhs - (1.0 - std::norm(z))) < 1e-13);
  }
}

TEST_CASE("property: plain box inside stretched box") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const BoxSpec b{random_point(rng, 0.97)};
    for (int k = 0; k < 200; ++k) {
      const Complex z = random_point(rng, 0.999);
      if (box_contains(b, z, false)) CHECK(box_contains(b, z, true));
    }
  }
  // area ratio: stretched depth doubles, half-angle fixed
  for (double r : {0.6, 0.8, 0.9, 0.99}) {
    const BoxSpec b{Complex{r, 0}};
    const double r0 = box_inner_radius(b, false), r1 = box_inner_radius(b, true);
    const double ratio = (1 - r1 * r1) / (1 - r0 * r0);
    CHECK(ratio >= 1.0);
    CHECK(ratio <= 2.5);
  }
}
