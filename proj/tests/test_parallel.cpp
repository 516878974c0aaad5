// The OpenMP kernels must reproduce the serial reference bit for bit.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "dirlab/carleson.hpp"
#include "dirlab/norms.hpp"
#include "dirlab/potential.hpp"

using namespace dirlab;

TEST_CASE("parallel_for visits every index once and propagates exceptions") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, ExecPolicy::openmp);
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(
                      100, [](std::size_t i) { if (i == 37) throw std::runtime_error("x"); }, ExecPolicy::openmp),
                  std::runtime_error);
}

TEST_CASE("policy guard restores the default") {
  const auto before = default_policy();
  {
    PolicyGuard g(ExecPolicy::serial);
    CHECK(default_policy() == ExecPolicy::serial);
  }
  CHECK(default_policy() == before);
}

TEST_CASE("norms: serial == openmp") {
  const auto f = zoo::make_blaschke({0.5, Complex{0, -0.7}});
  norms::NormOptions s, o;
  s.policy = ExecPolicy::serial;
  o.policy = ExecPolicy::openmp;
  const auto a = norms::norm_radial(f, {0.5, 1.0}, s);
  const auto b = norms::norm_radial(f, {0.5, 1.0}, o);
  CHECK(a.value_p_power == b.value_p_power);
  CHECK(a.quad.abs_error_estimate == b.quad.abs_error_estimate);
  CHECK(potential::rho(f, {0.5, 1.0}, s).value_p_power == potential::rho(f, {0.5, 1.0}, o).value_p_power);
}

TEST_CASE("carleson: serial == openmp") {
  const auto g = carleson::default_scan_grid(0);
  const auto a = carleson::ratio_scan(0.2, 1.5, g.a, g.w, ExecPolicy::serial);
  const auto b = carleson::ratio_scan(0.2, 1.5, g.a, g.w, ExecPolicy::openmp);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i].ratio == b.entries[i].ratio);
  const carleson::BoxMeasureParams P{0.5, 2.0, 0.9};
  const auto x = carleson::ars_lhs(P, 0.5, 0.8, 20000, 3, ExecPolicy::serial);
  const auto y = carleson::ars_lhs(P, 0.5, 0.8, 20000, 3, ExecPolicy::openmp);
  CHECK(x.value == y.value);
  CHECK(x.abs_error_estimate == y.abs_error_estimate);
}
