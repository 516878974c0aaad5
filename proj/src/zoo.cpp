#include "dirlab/zoo.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dirlab/quad.hpp"
#include "dirlab/specfun.hpp"

namespace dirlab::zoo {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::string fmt(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

// log(1 + w) without cancellation for small w.
Complex log1p_c(Complex w) {
  if (std::abs(w) < 0.5) return 2.0 * std::atanh(w / (2.0 + w));
  return std::log(1.0 + w);
}

double wrap_angle(double t) {
  double r = std::remainder(t, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

void require_not_one(Complex z, const char* who) {
  if (z == Complex(1.0, 0.0)) throw std::domain_error(std::string(who) + ": evaluation at z = 1");
}

// ---------------------------------------------------------------------------

class ConstNode final : public Node {
 public:
  explicit ConstNode(Complex c) : c_(c) {}
  Jet jet(Complex) const override { return {c_, 0.0}; }
  std::optional<LogJet> log_jet(Complex) const override {
    if (c_ == 0.0) return std::nullopt;
    return LogJet{std::log(c_), 0.0};
  }
  double log_abs(Complex) const override { return std::log(std::abs(c_)); }
  std::optional<Complex> boundary_value(double) const override { return c_; }

 private:
  Complex c_;
};

class MonomialNode final : public Node {
 public:
  explicit MonomialNode(int n) : n_(n) {}
  Jet jet(Complex z) const override {
    if (n_ == 0) return {1.0, 0.0};
    const Complex zn1 = std::pow(z, n_ - 1);
    return {zn1 * z, static_cast<double>(n_) * zn1};
  }
  std::optional<LogJet> log_jet(Complex) const override {
    if (n_ == 0) return LogJet{0.0, 0.0};
    return std::nullopt;
  }
  double log_abs(Complex z) const override { return n_ == 0 ? 0.0 : n_ * std::log(std::abs(z)); }
  std::optional<Complex> boundary_value(double t) const override { return std::polar(1.0, n_ * t); }
  double boundary_modulus(double) const override { return 1.0; }

 private:
  int n_;
};

class PolynomialNode final : public Node {
 public:
  explicit PolynomialNode(std::vector<Complex> c) : c_(std::move(c)) {}
  Jet jet(Complex z) const override {
    Complex v = 0.0, d = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      d = d * z + v;
      v = v * z + *it;
    }
    return {v, d};
  }
  std::optional<Complex> boundary_value(double t) const override { return jet(std::polar(1.0, t)).value; }

 private:
  std::vector<Complex> c_;
};

// Nodes whose value is exp(L) for an explicit continuous log branch L.
class LogNode : public Node {
 public:
  Jet jet(Complex z) const override {
    const auto lj = *log_jet(z);
    const Complex v = std::exp(lj.log_value);
    return {v, lj.log_deriv * v};
  }
  double log_abs(Complex z) const override { return log_jet(z)->log_value.real(); }
};

class FabNode final : public LogNode {
 public:
  FabNode(double a, double b) : a_(a), b_(b) {}
  std::optional<LogJet> log_jet(Complex z) const override {
    require_not_one(z, "fab");
    const Complex w = 1.0 - z;
    return LogJet{b_ * std::log(w) - a_ * (1.0 + z) / w, -b_ / w - 2.0 * a_ / (w * w)};
  }
  double log_abs(Complex z) const override {
    require_not_one(z, "fab");
    const Complex w = 1.0 - z;
    // Re (1 + z)/(1 - z) = (1 - |z|^2)/|1 - z|^2.
    return b_ * std::log(std::abs(w)) - a_ * (1.0 - std::norm(z)) / std::norm(w);
  }
  std::optional<Complex> boundary_value(double t) const override {
    if (wrap_angle(t) == 0.0) return std::nullopt;
    const double half = 0.5 * t;
    const Complex w = 1.0 - std::polar(1.0, t);
    // (1 + e^{it})/(1 - e^{it}) = i cot(t/2).
    return std::pow(w, b_) * std::exp(-a_ * kI * (std::cos(half) / std::sin(half)));
  }
  double boundary_modulus(double t) const override {
    const double tw = wrap_angle(t);
    if (tw == 0.0) {
      if (a_ > 0.0 || b_ > 0.0) return 0.0;
      if (b_ == 0.0) return 1.0;
      return std::numeric_limits<double>::infinity();
    }
    return std::pow(2.0 * std::abs(std::sin(0.5 * tw)), b_);
  }

 private:
  double a_, b_;
};

class PowerOuterNode final : public LogNode {
 public:
  PowerOuterNode(double c, double scale) : c_(c), log_scale_(std::log(Complex(scale))), scale_(scale) {}
  std::optional<LogJet> log_jet(Complex z) const override {
    if (c_ < 0.0) require_not_one(z, "powerouter");
    const Complex w = 1.0 - z;
    if (w == 0.0) return LogJet{Complex(-std::numeric_limits<double>::infinity(), 0.0), 0.0};
    return LogJet{log_scale_ + c_ * std::log(w), -c_ / w};
  }
  Jet jet(Complex z) const override {
    if (c_ < 0.0) require_not_one(z, "powerouter");
    const Complex w = 1.0 - z;
    if (c_ == 0.0) return {scale_, 0.0};
    const Complex v = scale_ * std::pow(w, c_);
    return {v, w == 0.0 ? Complex(c_ == 1.0 ? -scale_ : 0.0) : -c_ * v / w};
  }
  std::optional<Complex> boundary_value(double t) const override {
    const Complex w = 1.0 - std::polar(1.0, t);
    if (w == 0.0) return c_ > 0.0 ? std::optional<Complex>(0.0) : std::nullopt;
    return scale_ * std::pow(w, c_);
  }
  double boundary_modulus(double t) const override {
    const double tw = wrap_angle(t);
    if (tw == 0.0) return c_ > 0.0 ? 0.0 : (c_ == 0.0 ? std::abs(scale_) : std::numeric_limits<double>::infinity());
    return std::abs(scale_) * std::pow(2.0 * std::abs(std::sin(0.5 * tw)), c_);
  }

 private:
  double c_;
  Complex log_scale_;
  double scale_;
};

class BlaschkeNode final : public Node {
 public:
  explicit BlaschkeNode(std::vector<Complex> zeros) : zeros_(std::move(zeros)) {}
  Jet jet(Complex z) const override {
    // Product rule over the factors; n is small.
    const std::size_t n = zeros_.size();
    std::vector<Complex> v(n), d(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Complex zk = zeros_[k];
      if (zk == 0.0) {
        v[k] = z;
        d[k] = 1.0;
      } else {
        const Complex u = std::abs(zk) / zk;
        const Complex den = 1.0 - std::conj(zk) * z;
        v[k] = u * (zk - z) / den;
        d[k] = -u * (1.0 - std::norm(zk)) / (den * den);
      }
    }
    Complex value = 1.0, deriv = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      deriv = deriv * v[k] + value * d[k];
      value *= v[k];
    }
    return {value, deriv};
  }
  double log_abs(Complex z) const override {
    double s = 0.0;
    const double one_minus_z2 = 1.0 - std::norm(z);
    for (const auto& zk : zeros_) {
      // 1 - |b_k|^2 = (1 - |z|^2)(1 - |z_k|^2)/|1 - conj(z_k) z|^2.
      const double den = std::norm(1.0 - std::conj(zk) * z);
      const double defect = one_minus_z2 * (1.0 - std::norm(zk)) / den;
      if (defect < 0.5)
        s += 0.5 * std::log1p(-defect);
      else
        s += 0.5 * std::log(std::norm(zk - z) / den);
    }
    return s;
  }
  std::optional<Complex> boundary_value(double t) const override { return jet(std::polar(1.0, t)).value; }
  double boundary_modulus(double) const override { return 1.0; }

 private:
  std::vector<Complex> zeros_;
};

class KernelNode final : public LogNode {
 public:
  KernelNode(Complex a, double s, KernelVariant v) : a_(a), s_(s), variant_(v) {}
  std::optional<LogJet> log_jet(Complex z) const override {
    const Complex ab = std::conj(a_);
    const Complex den = 1.0 - ab * z;
    if (variant_ == KernelVariant::normalized)
      return LogJet{s_ * (std::log(1.0 - std::norm(a_)) - 2.0 * std::log(den)), 2.0 * s_ * ab / den};
    return LogJet{-s_ * std::log(den), s_ * ab / den};
  }
  std::optional<Complex> boundary_value(double t) const override {
    return std::exp(log_jet(std::polar(1.0, t))->log_value);
  }

 private:
  Complex a_;
  double s_;
  KernelVariant variant_;
};

// exp(c_0 + 2 sum_k c_k z^k): the Herglotz integral of a trigonometric
// interpolant of log m.
class OuterNode final : public LogNode {
 public:
  OuterNode(std::vector<Complex> c, std::function<double(double)> m) : c_(std::move(c)), m_(std::move(m)) {}
  std::optional<LogJet> log_jet(Complex z) const override {
    Complex s = 0.0, ds = 0.0;
    for (std::size_t k = c_.size() - 1; k >= 1; --k) {
      ds = ds * z + s;
      s = s * z + c_[k];
    }
    // s = sum_{k>=1} c_k z^{k-1}, ds = its derivative.
    return LogJet{c_[0] + 2.0 * z * s, 2.0 * (s + z * ds)};
  }
  double boundary_modulus(double t) const override { return m_(t); }

 private:
  std::vector<Complex> c_;
  std::function<double(double)> m_;
};

class SumNode final : public Node {
 public:
  SumNode(std::shared_ptr<const Node> f, std::shared_ptr<const Node> g) : f_(std::move(f)), g_(std::move(g)) {}
  Jet jet(Complex z) const override {
    const auto a = f_->jet(z), b = g_->jet(z);
    return {a.value + b.value, a.deriv + b.deriv};
  }
  std::optional<Complex> boundary_value(double t) const override {
    const auto a = f_->boundary_value(t), b = g_->boundary_value(t);
    if (!a || !b) return std::nullopt;
    return *a + *b;
  }

 private:
  std::shared_ptr<const Node> f_, g_;
};

class ProductNode final : public Node {
 public:
  ProductNode(std::shared_ptr<const Node> f, std::shared_ptr<const Node> g) : f_(std::move(f)), g_(std::move(g)) {}
  Jet jet(Complex z) const override {
    const auto a = f_->jet(z), b = g_->jet(z);
    return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
  }
  std::optional<LogJet> log_jet(Complex z) const override {
    const auto a = f_->log_jet(z);
    if (!a) return std::nullopt;
    const auto b = g_->log_jet(z);
    if (!b) return std::nullopt;
    return LogJet{a->log_value + b->log_value, a->log_deriv + b->log_deriv};
  }
  double log_abs(Complex z) const override { return f_->log_abs(z) + g_->log_abs(z); }
  std::optional<Complex> boundary_value(double t) const override {
    const auto a = f_->boundary_value(t), b = g_->boundary_value(t);
    if (!a || !b) return std::nullopt;
    return *a * *b;
  }
  double boundary_modulus(double t) const override { return f_->boundary_modulus(t) * g_->boundary_modulus(t); }

 private:
  std::shared_ptr<const Node> f_, g_;
};

// f^s through a continuous log branch. When f has no closed-form branch,
// log f is tracked along the segment [0, z]: log f(0) + int_0^1 z f'(uz)/f(uz) du.
class PowerNode final : public LogNode {
 public:
  PowerNode(std::shared_ptr<const Node> f, double s) : f_(std::move(f)), s_(s) {
    if (!f_->log_jet(0.0)) {
      const Complex f0 = f_->jet(0.0).value;
      if (f0 == 0.0) throw std::domain_error("power: function vanishes at 0");
      log_f0_ = std::log(f0);
    }
  }
  std::optional<LogJet> log_jet(Complex z) const override {
    if (auto lj = f_->log_jet(z)) return LogJet{s_ * lj->log_value, s_ * lj->log_deriv};
    const auto j = f_->jet(z);
    if (j.value == 0.0) throw std::domain_error("power: function vanishes");
    return LogJet{s_ * tracked_log(z), s_ * j.deriv / j.value};
  }
  double boundary_modulus(double t) const override { return std::pow(f_->boundary_modulus(t), s_); }

 private:
  Complex tracked_log(Complex z) const {
    if (z == 0.0) return log_f0_;
    quad::BatchFn<2> integrand = [&](std::span<const double> us, std::span<quad::Vec<2>> out) {
      for (std::size_t i = 0; i < us.size(); ++i) {
        const auto j = f_->jet(us[i] * z);
        const Complex v = z * j.deriv / j.value;
        out[i] = {v.real(), v.imag()};
      }
    };
    const double bp[2] = {0.0, 1.0};
    const auto r = quad::adaptive_gk<2>(integrand, bp, {1e-13, 1e-15});
    return log_f0_ + Complex(r.value[0], r.value[1]);
  }

  std::shared_ptr<const Node> f_;
  double s_;
  Complex log_f0_{};
};

class ConformalNode final : public Node {
 public:
  ConformalNode(std::shared_ptr<const Node> f, Complex a, double s) : f_(std::move(f)), a_(a), s_(s) {}
  Jet jet(Complex z) const override {
    const Complex w = discgeom::mobius(a_, z);
    const auto d = discgeom::mobius_derivs(a_, z);
    const auto fj = f_->jet(w);
    const auto lg = log_deriv_factor(z);
    const Complex e = std::exp(s_ * lg.log_value);
    return {e * fj.value, e * (s_ * lg.log_deriv * fj.value + d.first * fj.deriv)};
  }
  std::optional<LogJet> log_jet(Complex z) const override {
    const Complex w = discgeom::mobius(a_, z);
    const auto fl = f_->log_jet(w);
    if (!fl) return std::nullopt;
    const auto lg = log_deriv_factor(z);
    const auto d = discgeom::mobius_derivs(a_, z);
    return LogJet{s_ * lg.log_value + fl->log_value, s_ * lg.log_deriv + fl->log_deriv * d.first};
  }
  double log_abs(Complex z) const override {
    return s_ * log_deriv_factor(z).log_value.real() + f_->log_abs(discgeom::mobius(a_, z));
  }
  std::optional<Complex> boundary_value(double t) const override {
    const Complex zeta = std::polar(1.0, t);
    const auto fb = f_->boundary_value(std::arg(discgeom::mobius(a_, zeta)));
    if (!fb) return std::nullopt;
    return std::exp(s_ * log_deriv_factor(zeta).log_value) * *fb;
  }
  double boundary_modulus(double t) const override {
    const Complex zeta = std::polar(1.0, t);
    return std::exp(s_ * log_deriv_factor(zeta).log_value.real()) *
           f_->boundary_modulus(std::arg(discgeom::mobius(a_, zeta)));
  }

 private:
  // log phi_a'(z) on the branch log(1 - |a|^2) + i pi - 2 log(1 - conj(a) z), and its derivative.
  LogJet log_deriv_factor(Complex z) const {
    const Complex den = 1.0 - std::conj(a_) * z;
    return {std::log(1.0 - std::norm(a_)) + kI * kPi - 2.0 * std::log(den), 2.0 * std::conj(a_) / den};
  }

  std::shared_ptr<const Node> f_;
  Complex a_;
  double s_;
};

// f_{1,b} + g_c with log h = log g_c + log(1 + f/g_c); |f/g_c| <= 1 on the disc.
class CounterexampleNode final : public Node {
 public:
  CounterexampleNode(std::shared_ptr<const Node> f, std::shared_ptr<const Node> g) : f_(std::move(f)), g_(std::move(g)) {}
  Jet jet(Complex z) const override {
    const auto a = f_->jet(z), b = g_->jet(z);
    return {a.value + b.value, a.deriv + b.deriv};
  }
  std::optional<LogJet> log_jet(Complex z) const override {
    const auto lf = *f_->log_jet(z);
    const auto lg = *g_->log_jet(z);
    const Complex ratio = std::exp(lf.log_value - lg.log_value);
    const Complex lv = lg.log_value + log1p_c(ratio);
    // h'/h = (f'/f * ratio + g'/g) / (1 + ratio)
    return LogJet{lv, (lf.log_deriv * ratio + lg.log_deriv) / (1.0 + ratio)};
  }
  double log_abs(Complex z) const override { return log_jet(z)->log_value.real(); }
  std::optional<Complex> boundary_value(double t) const override {
    const auto a = f_->boundary_value(t), b = g_->boundary_value(t);
    if (!a || !b) return std::nullopt;
    return *a + *b;
  }

 private:
  std::shared_ptr<const Node> f_, g_;
};

// ---------------------------------------------------------------------------

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

std::vector<Complex> log_modulus_coefficients(const std::function<double(double)>& m, int n) {
  std::vector<double> samples(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * kPi * (j + 0.5) / n;
    const double v = m(t);
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("make_outer_from_modulus: modulus must be positive and finite (t = " + fmt(t) + ")");
    samples[static_cast<std::size_t>(j)] = std::log(v);
  }
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, samples.data(), out.get(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<Complex> c(static_cast<std::size_t>(n / 2));
  for (int k = 0; k < n / 2; ++k) {
    const Complex raw(out.get()[k][0], out.get()[k][1]);
    c[static_cast<std::size_t>(k)] = raw * std::polar(1.0, -kPi * k / n) / static_cast<double>(n);
  }
  // Drop coefficients below double resolution.
  double cmax = 0.0;
  for (const auto& x : c) cmax = std::max(cmax, std::abs(x));
  std::size_t keep = c.size();
  while (keep > 1 && std::abs(c[keep - 1]) <= 1e-17 * cmax) --keep;
  c.resize(keep);
  if (c.size() < 2) c.resize(2, 0.0);
  return c;
}

Structure product_structure(const TestFunction& f, const TestFunction& g) {
  if (f.structure() == Structure::inner && g.structure() == Structure::inner) return Structure::inner;
  if (f.structure() == Structure::outer && g.structure() == Structure::outer) return Structure::outer;
  if (!f.has_zeros() && !g.has_zeros()) return Structure::nonvanishing;
  return Structure::general;
}

std::vector<double> merged_angles(std::vector<double> a, const std::vector<double>& b) {
  for (double t : b)
    if (std::none_of(a.begin(), a.end(), [&](double s) { return std::abs(wrap_angle(s - t)) < 1e-15; }))
      a.push_back(t);
  return a;
}

std::optional<std::vector<Complex>> convolve(const std::optional<std::vector<Complex>>& a,
                                             const std::optional<std::vector<Complex>>& b) {
  if (!a || !b) return std::nullopt;
  std::vector<Complex> c(a->size() + b->size() - 1, 0.0);
  for (std::size_t i = 0; i < a->size(); ++i)
    for (std::size_t j = 0; j < b->size(); ++j) c[i + j] += (*a)[i] * (*b)[j];
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(Structure s) {
  switch (s) {
    case Structure::inner:
      return "inner";
    case Structure::outer:
      return "outer";
    case Structure::nonvanishing:
      return "nonvanishing";
    case Structure::general:
      return "general";
  }
  return "general";
}

double Node::log_abs(Complex z) const {
  if (auto lj = log_jet(z)) return lj->log_value.real();
  return std::log(std::abs(jet(z).value));
}

double Node::boundary_modulus(double t) const {
  if (auto v = boundary_value(t)) return std::abs(*v);
  throw std::logic_error("boundary modulus not available for this function");
}

TestFunction::TestFunction(std::shared_ptr<const Node> node, Metadata meta)
    : node_(std::move(node)), meta_(std::move(meta)) {}

double TestFunction::abs_pow(Complex z, double p) const {
  const double la = node_->log_abs(z);
  return std::exp(p * la);
}

double TestFunction::density(Complex z, double p) const {
  if (p == 2.0) return std::norm(node_->jet(z).deriv);
  if (auto lj = node_->log_jet(z)) {
    const double n2 = std::norm(lj->log_deriv);
    if (n2 == 0.0) return 0.0;
    return std::exp(p * lj->log_value.real() + std::log(n2));
  }
  const auto j = node_->jet(z);
  const double d2 = std::norm(j.deriv);
  if (d2 == 0.0) return 0.0;
  return std::exp((p - 2.0) * std::log(std::abs(j.value)) + std::log(d2));
}

std::array<double, 2> TestFunction::density_and_abs_pow(Complex z, double p) const {
  if (auto lj = node_->log_jet(z)) {
    const double la = lj->log_value.real();
    const double n2 = std::norm(lj->log_deriv);
    return {n2 == 0.0 ? 0.0 : std::exp(p * la + std::log(n2)), std::exp(p * la)};
  }
  const auto j = node_->jet(z);
  const double la = std::log(std::abs(j.value));
  const double d2 = std::norm(j.deriv);
  double dens;
  if (p == 2.0)
    dens = d2;
  else
    dens = d2 == 0.0 ? 0.0 : std::exp((p - 2.0) * la + std::log(d2));
  return {dens, std::exp(p * la)};
}

double TestFunction::one_minus_abs(Complex z) const { return -std::expm1(node_->log_abs(z)); }

TestFunction make_monomial(int n) {
  if (n < 0) throw std::invalid_argument("make_monomial: n must be nonnegative");
  Metadata m;
  m.structure = Structure::inner;
  m.zeros.assign(static_cast<std::size_t>(n), Complex(0.0));
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1, 0.0);
  c.back() = 1.0;
  m.coefficients = c;
  m.label = "monomial:" + std::to_string(n);
  return TestFunction(std::make_shared<MonomialNode>(n), std::move(m));
}

TestFunction make_polynomial(std::vector<Complex> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  Metadata m;
  m.structure = Structure::general;
  m.zeros_known = false;
  if (coefficients.size() == 1) {
    m.zeros_known = coefficients[0] != 0.0;
    if (m.zeros_known) m.structure = Structure::nonvanishing;
  }
  m.coefficients = coefficients;
  m.label = "polynomial(degree " + std::to_string(coefficients.size() - 1) + ")";
  return TestFunction(std::make_shared<PolynomialNode>(std::move(coefficients)), std::move(m));
}

TestFunction make_fab(FabParams params) {
  if (!(params.a >= 0.0)) throw std::invalid_argument("make_fab: a must be nonnegative");
  Metadata m;
  m.structure = Structure::nonvanishing;
  if (params.a != 0.0 || params.b != 0.0) m.singular_angles = {0.0};
  m.label = "fab:" + fmt(params.a) + ":" + fmt(params.b);
  return TestFunction(std::make_shared<FabNode>(params.a, params.b), std::move(m));
}

TestFunction make_power_outer(double c, double scale_factor) {
  if (scale_factor == 0.0) throw std::invalid_argument("make_power_outer: scale must be nonzero");
  Metadata m;
  m.structure = Structure::outer;
  if (c != 0.0) m.singular_angles = {0.0};
  m.label = "powerouter:" + fmt(c) + ":" + fmt(scale_factor);
  return TestFunction(std::make_shared<PowerOuterNode>(c, scale_factor), std::move(m));
}

TestFunction make_blaschke(std::vector<Complex> zeros) {
  for (const auto& z : zeros)
    if (!(std::abs(z) < 1.0)) throw std::invalid_argument("make_blaschke: zeros must lie in the open disc");
  Metadata m;
  m.structure = Structure::inner;
  m.zeros = zeros;
  std::string label = "blaschke:";
  for (std::size_t k = 0; k < zeros.size(); ++k) label += (k ? ";" : "") + fmt(zeros[k]);
  m.label = label;
  return TestFunction(std::make_shared<BlaschkeNode>(std::move(zeros)), std::move(m));
}

TestFunction make_atomic(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("make_atomic: sigma must be positive");
  Metadata m;
  m.structure = Structure::inner;
  m.singular_angles = {0.0};
  m.label = "atomic:" + fmt(sigma);
  return TestFunction(std::make_shared<FabNode>(sigma, 0.0), std::move(m));
}

TestFunction make_conformal_kernel(Complex a, double s, KernelVariant variant) {
  if (!(std::abs(a) < 1.0)) throw std::invalid_argument("make_conformal_kernel: need |a| < 1");
  if (!(s > 0.0)) throw std::invalid_argument("make_conformal_kernel: need s > 0");
  Metadata m;
  m.structure = Structure::nonvanishing;
  if (std::abs(a) > 0.0) m.singular_angles = {std::arg(a)};
  m.label = (variant == KernelVariant::normalized ? "kernel:" : "kernelplain:") + fmt(a) + ":" + fmt(s);
  return TestFunction(std::make_shared<KernelNode>(a, s, variant), std::move(m));
}

TestFunction make_outer_from_modulus(std::function<double(double)> modulus, int resolution, std::string label,
                                     double stable_tol) {
  if (!(stable_tol > 0.0)) throw std::invalid_argument("make_outer_from_modulus: tolerance must be positive");
  if (resolution < 64 || (resolution & (resolution - 1)) != 0)
    throw std::invalid_argument("make_outer_from_modulus: resolution must be a power of two >= 64");
  constexpr int kMaxResolution = 1 << 22;
  std::vector<Complex> probes;
  for (int j = 0; j < 16; ++j) probes.push_back(std::polar(0.9, 2.0 * kPi * (j + 0.25) / 16.0));

  auto build = [&](int n) { return std::make_shared<OuterNode>(log_modulus_coefficients(modulus, n), modulus); };
  int n = resolution;
  auto node = build(n);
  std::vector<Complex> prev;
  for (const auto& z : probes) prev.push_back(node->jet(z).value);
  bool stable = false;
  while (n < kMaxResolution) {
    n *= 2;
    auto next = build(n);
    double diff = 0.0;
    std::vector<Complex> cur;
    for (const auto& z : probes) cur.push_back(next->jet(z).value);
    for (std::size_t i = 0; i < cur.size(); ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]));
    node = std::move(next);
    prev = std::move(cur);
    if (diff < stable_tol) {
      stable = true;
      break;
    }
  }
  if (!stable) throw std::runtime_error("make_outer_from_modulus: Herglotz resolution did not stabilize");
  Metadata m;
  m.structure = Structure::outer;
  m.label = std::move(label);
  return TestFunction(std::move(node), std::move(m));
}

TestFunction truncate(const TestFunction& h, TruncateMode mode) {
  if (h.structure() != Structure::outer) throw std::invalid_argument("truncate: function must be outer");
  auto node = h.node();
  std::function<double(double)> m;
  if (mode == TruncateMode::min)
    m = [node](double t) { return std::min(1.0, node->boundary_modulus(t)); };
  else
    m = [node](double t) { return std::max(1.0, node->boundary_modulus(t)); };
  return make_outer_from_modulus(std::move(m), 256,
                                 (mode == TruncateMode::min ? "hmin(" : "hmax(") + h.label() + ")");
}

TestFunction combine(CombineOp op, const TestFunction& f, const TestFunction& g) {
  Metadata m;
  m.singular_angles = merged_angles(f.singular_angles(), g.singular_angles());
  if (op == CombineOp::sum) {
    m.structure = Structure::general;
    m.zeros_known = false;
    if (f.coefficients() && g.coefficients()) {
      const auto& a = *f.coefficients();
      const auto& b = *g.coefficients();
      std::vector<Complex> c(std::max(a.size(), b.size()), 0.0);
      for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
      for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
      m.coefficients = c;
    }
    m.label = "sum(" + f.label() + "," + g.label() + ")";
    return TestFunction(std::make_shared<SumNode>(f.node(), g.node()), std::move(m));
  }
  m.structure = product_structure(f, g);
  m.zeros_known = f.zeros_known() && g.zeros_known();
  if (m.zeros_known) {
    m.zeros = f.known_zeros();
    m.zeros.insert(m.zeros.end(), g.known_zeros().begin(), g.known_zeros().end());
  }
  m.coefficients = convolve(f.coefficients(), g.coefficients());
  m.label = "product(" + f.label() + "," + g.label() + ")";
  return TestFunction(std::make_shared<ProductNode>(f.node(), g.node()), std::move(m));
}

TestFunction scale(const TestFunction& f, Complex c) {
  if (c == 0.0) throw std::invalid_argument("scale: factor must be nonzero");
  Metadata k;
  k.structure = Structure::outer;
  k.label = fmt(c);
  k.coefficients = std::vector<Complex>{c};
  TestFunction constant(std::make_shared<ConstNode>(c), std::move(k));
  auto out = combine(CombineOp::product, constant, f);
  Metadata m = out.metadata();
  m.structure = f.structure() == Structure::inner ? Structure::general : f.structure();
  if (f.structure() == Structure::inner && !f.has_zeros()) m.structure = Structure::nonvanishing;
  return TestFunction(out.node(), std::move(m));
}

TestFunction power(const TestFunction& f, double s) {
  if (f.has_zeros()) throw std::domain_error("power: " + f.label() + " has (or may have) zeros in the disc");
  Metadata m;
  m.structure = f.structure() == Structure::general ? Structure::nonvanishing : f.structure();
  m.singular_angles = f.singular_angles();
  m.label = "power(" + f.label() + "," + fmt(s) + ")";
  return TestFunction(std::make_shared<PowerNode>(f.node(), s), std::move(m));
}

TestFunction compose_conformal(const TestFunction& f, Complex a, double s) {
  if (!(std::abs(a) < 1.0)) throw std::invalid_argument("compose_conformal: need |a| < 1");
  Metadata m;
  m.zeros_known = f.zeros_known();
  for (const auto& z : f.known_zeros()) m.zeros.push_back(discgeom::mobius(a, z));
  for (double t : f.singular_angles()) m.singular_angles.push_back(std::arg(discgeom::mobius(a, std::polar(1.0, t))));
  if (std::abs(a) > 0.0) m.singular_angles = merged_angles(m.singular_angles, {std::arg(a)});
  if (f.structure() == Structure::outer)
    m.structure = Structure::outer;
  else if (!f.has_zeros())
    m.structure = Structure::nonvanishing;
  else
    m.structure = Structure::general;
  m.label = "T[" + fmt(a) + "," + fmt(s) + "](" + f.label() + ")";
  return TestFunction(std::make_shared<ConformalNode>(f.node(), a, s), std::move(m));
}

Counterexample counterexample_h(double alpha, double p, double epsilon) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("counterexample_h: alpha must lie in (0, 1)");
  if (!(p > 0.0)) throw std::invalid_argument("counterexample_h: p must be positive");
  if (p == 2.0) throw std::invalid_argument("counterexample_h: p = 2 has no counterexample");
  if (!(epsilon > 0.0 && epsilon < 1.0 - alpha))
    throw std::invalid_argument("counterexample_h: epsilon must lie in (0, 1 - alpha)");
  Counterexample out{make_monomial(0), make_monomial(0), make_monomial(0), 0.0, 0.0};
  out.c = (epsilon - alpha) / p;
  if (p > 2.0)
    out.b = 0.5 - alpha + out.c - out.c * p / 2.0;  // b - c + cp/2 = 1/2 - alpha
  else
    out.b = (1.0 - 2.0 * alpha) / p;
  out.f1b = make_fab({1.0, out.b});
  out.gc = make_power_outer(out.c, std::pow(2.0, out.b - out.c));

  auto node = std::make_shared<CounterexampleNode>(out.f1b.node(), out.gc.node());
  // |f/g_c| <= 1 with equality only at z = -1, so 1 + f/g_c stays off 0.
  double min_mod = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 24; ++i) {
    const double r = i == 0 ? 0.0 : quad::dyadic_radius(i);
    for (int j = 0; j < 512; ++j) {
      const Complex z = std::polar(r, 2.0 * kPi * (j + 0.5) / 512.0);
      min_mod = std::min(min_mod, std::abs(node->jet(z).value));
    }
  }
  if (!(min_mod > 1e-12)) throw std::runtime_error("counterexample_h: h vanishes on the sample grid");

  Metadata m;
  m.structure = Structure::nonvanishing;
  m.singular_angles = {0.0};
  m.label = "counterexample:" + fmt(alpha) + ":" + fmt(p) + ":" + fmt(epsilon);
  out.h = TestFunction(std::move(node), std::move(m));
  return out;
}

TestFunction binomial_partial_sum(double p, double b, double c, int terms) {
  if (terms < 1) throw std::invalid_argument("binomial_partial_sum: need at least one term");
  std::optional<TestFunction> acc;
  for (int j = 0; j < terms; ++j) {
    const double coef = specfun::gen_binomial(p / 2.0, static_cast<unsigned>(j)) / std::pow(2.0, j * (b - c));
    auto term = scale(make_fab({static_cast<double>(j), j * (b - c) + c * p / 2.0}), coef);
    acc = acc ? combine(CombineOp::sum, *acc, term) : term;
  }
  return *acc;
}

}  // namespace dirlab::zoo
