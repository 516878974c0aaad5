#pragma once

// Poisson extensions, the Green function of the disc, the Riesz defect
// P_z(|f|^p) - |f(z)|^p and the functionals built from it.
//
// Convention: P_z(u) - u(z) = (1/2 pi) int G_z(w) Lap u(w) dA_Lebesgue(w),
// i.e. (1/2) int G_z Lap u dA with dA normalized. Checked on u = |z|^2 at 0.

#include <functional>
#include <stdexcept>
#include <vector>

#include "dirlab/norms.hpp"
#include "dirlab/quad.hpp"
#include "dirlab/zoo.hpp"

namespace dirlab::potential {

/// Thrown when a Poisson evaluation near the circle needs more boundary
/// samples than are available.
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(const std::string& what, long required) : std::runtime_error(what), required_(required) {}
  long required_resolution() const { return required_; }

 private:
  long required_;
};

/// Nonnegative boundary data on the uniform grid t_j = 2 pi j / N.
class BoundaryData {
 public:
  /// N = samples.size() must be a power of two, at least 64.
  static BoundaryData from_samples(std::vector<double> samples);
  /// Samples g on N = resolution nodes; keeps g so the grid can be refined.
  static BoundaryData from_function(std::function<double(double)> g, int resolution = 64);

  int resolution() const { return static_cast<int>(samples_.size()); }
  const std::vector<double>& samples() const { return samples_; }
  bool refinable() const { return static_cast<bool>(source_); }
  /// The same data on twice as many nodes. Requires refinable().
  BoundaryData refined() const;
  double mean() const;

 private:
  BoundaryData(std::vector<double> samples, std::function<double(double)> source);
  std::vector<double> samples_;
  std::function<double(double)> source_;
};

struct PoissonOptions {
  double tol = 1e-8;
  long max_resolution = 1L << 22;
  int nodes_per_width = 16;
};

/// Trapezoid value of the Poisson integral at z. Refines refinable data
/// until stable to tol, or until 1 - |z| spans nodes_per_width nodes.
double poisson_extension(const BoundaryData& g, Complex z, const PoissonOptions& opt = {});

/// Poisson kernel (1 - |z|^2)/|z - e^{it}|^2.
double poisson_kernel(Complex z, double t);

/// G_z(w) = log|(1 - conj(z) w)/(w - z)|. Throws for z == w.
double green(Complex z, Complex w);

/// int G_w(z) (1 - |z|^2)^(alpha - 2) dA(z) in closed form, 0 < alpha < 1.
double green_weight_potential(Complex w, double alpha);

enum class Route { poisson, green };

/// P_z(|f|^p) - |f(z)|^p. The Poisson route integrates the boundary modulus
/// against the kernel; the Green route integrates the density against G_z
/// after the change of variables w = phi_z(zeta).
quad::QuadResult riesz_defect(const zoo::TestFunction& f, double p, Complex z, Route via, double rel_tol = 1e-9);

/// Mean of |f|^p over the circle from the boundary modulus. Throws
/// std::logic_error if f has no boundary modulus.
quad::QuadResult boundary_p_mean(const zoo::TestFunction& f, double p, double rel_tol = 1e-11);

/// int (P_z(|f|^p) - |f(z)|^p)(1 - |z|^2)^(alpha - 2) dA, 0 < alpha < 1.
/// Circle means of the Poisson defect inside prof.poisson_radius, the
/// Green kernel outside. `boundary_mean` is the mean of |f|^p on the circle.
norms::NormEstimate rho(const norms::DensityProfile& prof, double boundary_mean);
norms::NormEstimate rho(const zoo::TestFunction& f, norms::SpaceParams sp, const norms::NormOptions& opt = {});

/// int (1 - |theta|)|f|^p (1 - |z|^2)^(alpha - 2) dA with truncation probe.
norms::NormEstimate inner_divisor_criterion(const zoo::TestFunction& theta, const zoo::TestFunction& f,
                                            norms::SpaceParams sp, double rel_tol = 1e-9);

struct PowerTrick {
  norms::NormEstimate lhs;  // rho(theta h) at (alpha, p)
  norms::NormEstimate rhs;  // rho(theta h^(p/q)) at (alpha, q)
  bool same_verdict = false;
};

PowerTrick power_trick_check(const zoo::TestFunction& theta, const zoo::TestFunction& h, norms::SpaceParams sp,
                             double q, const norms::NormOptions& opt = {});

}  // namespace dirlab::potential
