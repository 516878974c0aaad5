#pragma once

// Catalog of holomorphic test functions on the unit disc.
//
// A TestFunction is an immutable handle to an evaluation node. Nodes supply
// value and derivative, and where available a continuous branch of log f
// with its derivative f'/f. The log branch is what keeps |f|^p and
// |f|^(p-2)|f'|^2 finite where f itself under- or overflows (atomic factors
// near the singular point, for instance).

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dirlab/discgeom.hpp"

namespace dirlab::zoo {

enum class Structure { inner, outer, nonvanishing, general };

std::string to_string(Structure s);

struct Jet {
  Complex value;
  Complex deriv;
};

/// log f on a continuous branch, and (log f)' = f'/f.
struct LogJet {
  Complex log_value;
  Complex log_deriv;
};

class Node {
 public:
  virtual ~Node() = default;
  virtual Jet jet(Complex z) const = 0;
  virtual std::optional<LogJet> log_jet(Complex) const { return std::nullopt; }
  /// log|f(z)|; overridden where the generic route loses accuracy.
  virtual double log_abs(Complex z) const;
  /// Boundary value f(e^{it}) where the closed form has one.
  virtual std::optional<Complex> boundary_value(double) const { return std::nullopt; }
  virtual double boundary_modulus(double t) const;
};

struct Metadata {
  Structure structure = Structure::general;
  std::vector<Complex> zeros;          // with multiplicity
  bool zeros_known = true;             // false: zero set not tracked
  std::vector<double> singular_angles; // boundary points where f or f' blows up or oscillates
  std::optional<std::vector<Complex>> coefficients;  // Taylor coefficients (polynomials only)
  std::string label;
};

class TestFunction {
 public:
  TestFunction(std::shared_ptr<const Node> node, Metadata meta);

  Complex eval(Complex z) const { return node_->jet(z).value; }
  Complex deriv(Complex z) const { return node_->jet(z).deriv; }
  Jet jet(Complex z) const { return node_->jet(z); }
  std::optional<LogJet> log_jet(Complex z) const { return node_->log_jet(z); }
  double log_abs(Complex z) const { return node_->log_abs(z); }
  double boundary_modulus(double t) const { return node_->boundary_modulus(t); }
  std::optional<Complex> boundary_value(double t) const { return node_->boundary_value(t); }

  /// |f(z)|^p.
  double abs_pow(Complex z, double p) const;
  /// |f(z)|^(p-2) |f'(z)|^2, the Laplacian of |f|^p divided by p^2.
  double density(Complex z, double p) const;
  /// {density(z, p), abs_pow(z, p)} from a single evaluation.
  std::array<double, 2> density_and_abs_pow(Complex z, double p) const;
  /// 1 - |f(z)|, accurate when |f| is close to 1.
  double one_minus_abs(Complex z) const;

  Structure structure() const { return meta_.structure; }
  const std::vector<Complex>& known_zeros() const { return meta_.zeros; }
  bool zeros_known() const { return meta_.zeros_known; }
  const std::vector<double>& singular_angles() const { return meta_.singular_angles; }
  const std::optional<std::vector<Complex>>& coefficients() const { return meta_.coefficients; }
  const std::string& label() const { return meta_.label; }
  bool has_zeros() const { return !meta_.zeros_known || !meta_.zeros.empty(); }

  const Metadata& metadata() const { return meta_; }
  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  std::shared_ptr<const Node> node_;
  Metadata meta_;
};

struct FabParams {
  double a = 0.0;
  double b = 0.0;
};

TestFunction make_monomial(int n);
TestFunction make_polynomial(std::vector<Complex> coefficients);
TestFunction make_fab(FabParams params);
TestFunction make_power_outer(double c, double scale = 1.0);
TestFunction make_blaschke(std::vector<Complex> zeros);
TestFunction make_atomic(double sigma);

enum class KernelVariant { normalized, plain };
/// normalized: ((1 - |a|^2)/(1 - conj(a) z)^2)^s; plain: (1 - conj(a) z)^(-s).
TestFunction make_conformal_kernel(Complex a, double s, KernelVariant variant = KernelVariant::normalized);

/// Outer function with boundary modulus m, built from the Fourier
/// coefficients of log m (trapezoid rule on an offset grid). The grid is
/// doubled from `resolution` until 16 probe values on |z| = 0.9 move by
/// less than `stable_tol`. Moduli with boundary zeros converge only like
/// 1/N and need a looser tolerance.
TestFunction make_outer_from_modulus(std::function<double(double)> modulus, int resolution = 256,
                                     std::string label = "outer", double stable_tol = 1e-8);

enum class TruncateMode { min, max };
TestFunction truncate(const TestFunction& h, TruncateMode mode);

enum class CombineOp { sum, product };
TestFunction combine(CombineOp op, const TestFunction& f, const TestFunction& g);
TestFunction scale(const TestFunction& f, Complex c);
TestFunction power(const TestFunction& f, double s);

/// (phi_a')^s (f o phi_a), phi_a the involution (a - z)/(1 - conj(a) z).
TestFunction compose_conformal(const TestFunction& f, Complex a, double s);

struct Counterexample {
  TestFunction f1b;
  TestFunction gc;
  TestFunction h;
  double b = 0.0;
  double c = 0.0;
};

/// h = f_{1,b} + g_c with g_c = 2^{b-c} (1 - z)^c, c = (eps - alpha)/p and
/// b chosen by the case p > 2 or p < 2.
Counterexample counterexample_h(double alpha, double p, double epsilon);

/// Partial sum of the binomial series sum_j binom(p/2, j) f_{j, j(b-c)+cp/2} / 2^{j(b-c)}.
TestFunction binomial_partial_sum(double p, double b, double c, int terms);

}  // namespace dirlab::zoo
