#pragma once

// Box measures d mu(z) = (1 - |z|)^gamma / |1 - conj(a) z|^s dA(z) on
// Carleson boxes, the comparator (1 - |w|)^(gamma+2) / |1 - conj(a) w|^s,
// and the single-box ARS testing quantity.
//
// S_w = {1 - |z| <= 1 - |w|, |arg(z conj(w))| < 2 pi (1 - |w|)}; the
// stretched box doubles the radial depth. Both are polar rectangles.

#include <cstdint>
#include <string>
#include <vector>

#include "dirlab/discgeom.hpp"
#include "dirlab/quad.hpp"

namespace dirlab::carleson {

struct BoxMeasureParams {
  double gamma = 0.0;
  double s = 0.0;
  Complex a{0.0, 0.0};

  /// Throws std::invalid_argument unless gamma + 2 - s > 0, s >= 0, |a| < 1.
  void validate() const;
};

/// Polar rectangle {r0 <= |z| <= 1, arg z in [t0, t1]} with t1 - t0 <= 2 pi.
struct PolarRect {
  double r0 = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
};

/// The box as a polar rectangle (angles centred on arg w).
PolarRect box_rect(Complex w, bool stretched);

/// Intersection of two boxes: a radial interval times up to two arcs.
std::vector<PolarRect> box_intersection(Complex z, Complex w);

/// mu(rect) by adaptive quadrature (closed angular forms for s = 0 and s = 2).
quad::QuadResult mu_rect(const BoxMeasureParams& params, const PolarRect& rect, double rel_tol = 1e-10);

/// mu(rect) by fixed low-order Gauss rules in both variables; cheap
/// enough for the Monte-Carlo layer.
double mu_rect_fast(const BoxMeasureParams& params, const PolarRect& rect);

quad::QuadResult mu_box(const BoxMeasureParams& params, Complex w, bool stretched);

double mu_comparator(const BoxMeasureParams& params, Complex w);

/// 1: w in S_a, 2: a in S_w, 3: neither.
int regime(Complex a, Complex w);

struct RatioEntry {
  Complex a;
  Complex w;
  int regime = 3;
  double ratio = 0.0;            // mu_box / mu_comparator
  double stretched_ratio = 0.0;  // mu_box(stretched) / mu_box(plain)
};

struct RegimeSummary {
  int regime = 0;
  std::size_t count = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

struct RatioScan {
  double gamma = 0.0;
  double s = 0.0;
  std::vector<RatioEntry> entries;
  std::vector<RegimeSummary> regimes;  // regimes 1..3, count 0 when absent
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double max_stretched_ratio = 0.0;
  bool covers_all_regimes() const;
};

/// Ratios over all pairs of a_grid x w_grid.
RatioScan ratio_scan(double gamma, double s, const std::vector<Complex>& a_grid, const std::vector<Complex>& w_grid,
                     ExecPolicy policy = default_policy());

/// Default scan grid: real a with |a| in [0, 0.95], w = |w| e^{it} over
/// radii in [0.55, 0.95] and angles in [0, pi]; `refine` doubles each axis.
struct ScanGrid {
  std::vector<Complex> a;
  std::vector<Complex> w;
};
ScanGrid default_scan_grid(int refine = 0);

/// int over the stretched box of mu(S_z cap S_w)^2 dA(z) / (1 - |z|)^(2+alpha),
/// by stratified Monte Carlo (6 x 6 strata in depth and angle).
quad::QuadResult ars_lhs(const BoxMeasureParams& params, double alpha, Complex w, long mc_samples, std::uint64_t seed,
                         ExecPolicy policy = default_policy());

struct ArsEntry {
  Complex a;
  Complex w;
  double lhs = 0.0;
  double lhs_error = 0.0;
  double mu_w = 0.0;
  double ratio = 0.0;
};

struct ArsScan {
  double gamma = 0.0;
  double s = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::vector<ArsEntry> entries;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::vector<double> max_by_a;  // per a-grid value, in grid order
  std::vector<double> max_by_w;
  bool growth_in_a = false;  // row maxima increase along the whole a-grid and end 50% higher
  bool growth_in_w = false;
};

ArsScan ars_uniformity_scan(double gamma, double s, double alpha, const std::vector<Complex>& a_grid,
                            const std::vector<Complex>& w_grid, std::uint64_t seed, long mc_samples = 100000,
                            ExecPolicy policy = default_policy());

}  // namespace dirlab::carleson
