#pragma once

#include "fraclab/common.hpp"
#include "fraclab/measures.hpp"

#include <memory>

namespace fraclab::fourier {

/// Convention throughout: mu-hat(xi) = integral of exp(-i <x, xi>) d mu(x).
/// All reported quantities are modulus-level, so the sign choice never leaks
/// into results.

struct TransformRequest {
  double tol = 1e-10;  // truncation tolerance of the recursive transform
  int max_depth = 64;

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("transform: tol must be > 0");
    if (max_depth < 1) throw std::invalid_argument("transform: max_depth must be >= 1");
  }
};

/// Sum_k c_k exp(-i <a_k, xi>); exact up to floating point.
Complex ft_atomic(const measures::AtomicMeasure& mu, const Vec& xi);

/// Sum_k f_k c_k exp(-i <a_k, xi>).
Complex ft_atomic(const measures::WeightedMeasure& mu, const Vec& xi);

/// Recursive transform of a self-similar measure via
///   mu-hat(xi) = Sum_j p_j exp(-i <b_j, xi>) mu-hat(s_j R_j^T xi),
/// descending until s_w |xi| sup{|x| : x in box} <= tol, where the base case
/// returns 1 with error <= tol. Collapses to a product of per-level factors
/// when the IFS has one shared (ratio, rotation). Throws DepthExceededError
/// when max_depth is hit first.
Complex ft_self_similar(const measures::IFSMeasure& mu, const Vec& xi,
                        const TransformRequest& req);

/// Frequency-side view of a measure, shared by every averaging routine.
class SpectrumEvaluator {
 public:
  virtual ~SpectrumEvaluator() = default;
  virtual Complex ft(const Vec& xi) const = 0;
  virtual int dim() const = 0;
  /// Spatial diameter of the underlying measure; |ft|^p oscillates in
  /// frequency at wavelength 2*pi / extent.
  virtual double spatial_extent() const = 0;
};

class AtomicSpectrum final : public SpectrumEvaluator {
 public:
  explicit AtomicSpectrum(measures::AtomicMeasure mu);
  explicit AtomicSpectrum(const measures::WeightedMeasure& mu);
  Complex ft(const Vec& xi) const override;
  int dim() const override { return mu_.dim(); }
  double spatial_extent() const override { return extent_; }
  const measures::AtomicMeasure& measure() const { return mu_; }

 private:
  measures::AtomicMeasure mu_;
  double extent_;
};

class SelfSimilarSpectrum final : public SpectrumEvaluator {
 public:
  SelfSimilarSpectrum(measures::IFSMeasure mu, TransformRequest req);
  Complex ft(const Vec& xi) const override;
  int dim() const override { return mu_.dim(); }
  double spatial_extent() const override;

 private:
  measures::IFSMeasure mu_;
  TransformRequest req_;
};

/// Exact transform of scale * cylinder_approx(ifs, depth) for an IFS with a
/// shared (ratio, rotation), factorized into depth many m-term products.
/// Identical (up to rounding) to ft_atomic over the cylinder atoms, at
/// O(depth * m) per evaluation instead of O(m^depth).
class CylinderSpectrum final : public SpectrumEvaluator {
 public:
  CylinderSpectrum(measures::IFSMeasure mu, int depth, double scale = 1.0);
  Complex ft(const Vec& xi) const override;
  int dim() const override { return mu_.dim(); }
  double spatial_extent() const override;

 private:
  measures::IFSMeasure mu_;
  int depth_;
  double scale_;
  Vec base_point_;  // s^depth R^depth x0
};

/// Fixed radial C-infinity bump with unit integral, supported in the unit
/// ball: chi(x) = c_n exp(-1/(1-|x|^2)).
class Mollifier {
 public:
  explicit Mollifier(int dim);

  int dim() const { return dim_; }
  /// Radial Fourier transform value chi-hat(rho), rho >= 0.
  double hat(double rho) const;
  double l2_norm_sq() const { return l2_sq_; }
  /// Smallest radius beyond which |chi-hat| stays under cut (scanned
  /// envelope with a trailing window).
  double cutoff_radius(double cut) const;

 private:
  int dim_;
  double norm_const_;
  double l2_sq_;
};

/// ||u * chi_eps||_2^2 for atomic u, computed in frequency space as
/// (2 pi)^{-n} integral of |u-hat|^2 |chi-hat(eps xi)|^2, truncated where
/// |chi-hat(eps xi)| < width_cut. Throws BudgetError when the truncated
/// domain still needs more than sample_cap nodes.
double mollified_l2(const measures::AtomicMeasure& mu, double epsilon,
                    double width_cut = 1e-8,
                    std::size_t sample_cap = std::size_t{1} << 24);

}  // namespace fraclab::fourier
