#pragma once

#include "fraclab/common.hpp"
#include "fraclab/fourier.hpp"
#include "fraclab/measures.hpp"

#include <span>
#include <vector>

namespace fraclab::asymptotics {

/// A normalized Fourier functional sampled over a growing L grid, with
/// min/max over the last half of the grid standing in for the unobservable
/// liminf/limsup.
struct AsymptoticSeries {
  double exponent_k = 0.0;
  double p = 0.0;
  std::vector<double> L_values;
  std::vector<double> values;
  double liminf_est = 0.0;
  double limsup_est = 0.0;

  /// Computes the band estimates and checks the ordering invariants.
  void finalize();
  /// Band ratio limsup_est / liminf_est (infinite when the floor is 0).
  double band_ratio() const;
};

struct QuadratureSettings {
  int radial_samples = 512;    // base panel count of the radial rule
  int angular_order = 64;      // trapezoid points on the circle (n = 2)
  int min_per_oscillation = 8; // radial samples per oscillation of |ft|^p
  std::size_t sample_cap = std::size_t{1} << 26;
};

/// Dyadic-style grid base^(start) .. base^(start+count-1).
std::vector<double> power_grid(double base, int start, int count);

/// Integral of |ft(r omega)|^p over the unit sphere directions: the two-point
/// counting measure for n = 1, a quad_order-point trapezoid rule for n = 2.
double spherical_average(const fourier::SpectrumEvaluator& u, double r,
                         double p, int quad_order = 64);

/// L^{-k} * integral_0^L of spherical_average(r) r^{n-1} dr by composite
/// Simpson on a geometric-then-uniform radial grid. radial_samples >= 64.
double ball_average(const fourier::SpectrumEvaluator& u, double L, double p,
                    double k, const QuadratureSettings& quad = {});

/// L^{-k} * integral of exp(-|xi|^2/(2L^2)) |ft|^p, radial quadrature
/// truncated at |xi| = 6L (relative Gaussian tail below 1e-7).
double gaussian_average(const fourier::SpectrumEvaluator& u, double L, double p,
                        double k, const QuadratureSettings& quad = {});

AsymptoticSeries ball_series(const fourier::SpectrumEvaluator& u,
                             std::span<const double> L_grid, double p, double k,
                             const QuadratureSettings& quad = {});
AsymptoticSeries gaussian_series(const fourier::SpectrumEvaluator& u,
                                 std::span<const double> L_grid, double p,
                                 double k, const QuadratureSettings& quad = {});

/// Grid maximum of (L^{-(n-alpha)} integral_{B_L} |ft|^p)^{1/p}; a lower
/// bound for the sup over all L >= 1.
double sup_ball_norm(const fourier::SpectrumEvaluator& u, double alpha,
                     double p, std::span<const double> L_grid,
                     const QuadratureSettings& quad = {});

/// Grid maximum of (delta^{-(n + alpha(p-1))} integral |mu(Q_delta(x))|^p dx)^{1/p}
/// over half-open cubes Q_delta(x); the x-integral is an exact breakpoint
/// sweep for n = 1 and a midpoint grid at resolution delta * grid_res_factor
/// for n = 2.
double cube_mass_norm(const measures::AtomicMeasure& mu, double alpha, double p,
                      std::span<const double> delta_grid,
                      double grid_res_factor = 0.25);

}  // namespace fraclab::asymptotics
