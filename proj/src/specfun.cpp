#include "dirlab/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dirlab::specfun {
namespace {

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double x) {
  // x is the shifted argument (x - 1 in the usual notation).
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (x + static_cast<double>(i));
  return acc;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace

double gamma(double x) {
  if (!std::isfinite(x)) throw std::domain_error("gamma: non-finite argument");
  if (is_nonpositive_integer(x)) throw std::domain_error("gamma: pole at " + std::to_string(x));
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
    const double s = std::sin(std::numbers::pi * x);
    return std::numbers::pi / (s * gamma(1.0 - x));
  }
  if (x > 171.61447887182298) throw std::overflow_error("gamma: overflow for x = " + std::to_string(x));
  const double xm = x - 1.0;
  const double t = xm + kLanczosG + 0.5;
  // Split the power so t^(xm + 1/2) does not overflow before e^-t is applied.
  const double half = std::pow(t, 0.5 * (xm + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * lanczos_sum(xm);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  if (!std::isfinite(x)) return x;
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  if (x == 1.0 || x == 2.0) return 0.0;
  const double xm = x - 1.0;
  const double t = xm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm));
}

double beta(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("beta: requires positive arguments");
  return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

double gen_binomial(double s, unsigned j) {
  double acc = 1.0;
  for (unsigned i = 0; i < j; ++i) acc *= (s - static_cast<double>(i)) / static_cast<double>(i + 1);
  return acc;
}

double besov_coeff(double alpha, unsigned n) {
  if (!(alpha > 0.0)) throw std::domain_error("besov_coeff: requires alpha > 0");
  if (n == 0) return 1.0;
  const double dn = static_cast<double>(n);
  return std::exp(log_gamma(dn + alpha) - log_gamma(alpha) - log_gamma(dn + 1.0));
}

double radial_tail_weight(double alpha, double t, double one_minus_t) {
  if (!(alpha > 0.0)) throw std::domain_error("radial_tail_weight: requires alpha > 0");
  if (!(t > 0.0) || t > 1.0) throw std::domain_error("radial_tail_weight: requires 0 < t <= 1");
  if (one_minus_t <= 0.0) return 0.0;

  // With u = r^2: V = 1/2 int_{t^2}^1 (1 - u)^(alpha - 1) u^-1 du.
  // Near u = 1 expand u^-1 = sum v^k (v = 1 - u <= 1/2).
  auto near_one = [alpha](double v) {
    double term_pow = std::pow(v, alpha);
    double acc = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double term = term_pow / (alpha + k);
      acc += term;
      if (term < 1e-17 * acc) break;
      term_pow *= v;
    }
    return 0.5 * acc;
  };
  const double v = one_minus_t * (1.0 + t);
  if (v <= 0.5) return near_one(v);

  // Small t: split 1/u + ((1 - u)^(alpha-1) - 1)/u and integrate the smooth
  // part by its Taylor series G(x) = sum_k binom(alpha-1, k) (-1)^k x^k / k.
  auto smooth_part = [alpha](double x) {
    double coeff = 1.0;  // binom(alpha - 1, k) (-1)^k, built up iteratively
    double xk = 1.0;
    double acc = 0.0;
    for (int k = 1; k < 400; ++k) {
      coeff *= (static_cast<double>(k) - alpha) / static_cast<double>(k);
      xk *= x;
      const double term = coeff * xk / k;
      acc += term;
      if (coeff == 0.0 || std::abs(term) < 1e-17 * std::abs(acc)) break;
    }
    return acc;
  };
  const double u = t * t;
  return near_one(0.5) + 0.5 * (std::log(0.5) - std::log(u)) + 0.5 * (smooth_part(0.5) - smooth_part(u));
}

}  // namespace dirlab::specfun
