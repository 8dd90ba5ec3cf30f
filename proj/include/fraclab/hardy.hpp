#pragma once

#include "fraclab/asymptotics.hpp"
#include "fraclab/common.hpp"
#include "fraclab/fourier.hpp"
#include "fraclab/measures.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fraclab::hardy {

/// The inequality families the lab can check, named by what they compare.
enum class Inequality {
  kDiscreteHardy,     // rearranged coefficient sum vs almost-periodic mean, k = n
  kFractalHardy,      // truncation-weighted p-mass vs ball average, k = n - alpha
  kL2BallLowerBound,  // L2 mass vs ball average at the k = n - alpha exponent
  kLpBallLowerBound,  // L2 mass vs ball average, 2 <= p < 2n/alpha, k = n - alpha p/2
  kL2DensityBound,    // L2 density mass vs ball average, k = n - alpha p/2
};

std::string inequality_name(Inequality id);

struct HardySetup {
  measures::WeightedMeasure measure;
  double p = 1.0;
  Inequality theorem = Inequality::kFractalHardy;
  std::vector<double> L_grid;
  double alpha = 0.5;  // dimension entering the normalization exponent
  asymptotics::QuadratureSettings quad;
  double band_factor = 8.0;  // stability rule on the RHS tail band
  /// Optional replacement evaluator for the transform of f d mu (e.g. the
  /// factorized cylinder transform); defaults to the folded atomic sum.
  std::shared_ptr<const fourier::SpectrumEvaluator> spectrum;

  /// Throws SetupError naming the violated precondition.
  void validate() const;
  /// Normalization exponent k for the RHS series of this theorem.
  double rhs_exponent() const;
};

/// Per-inequality verdict: LHS value, RHS band, observed constant, and a
/// stability flag under the tail-band rule.
struct VerdictReport {
  std::string theorem_name;
  double lhs = 0.0;
  asymptotics::AsymptoticSeries rhs_series;
  double empirical_C = 0.0;  // lhs / rhs tail-band minimum
  bool stable = false;
  std::string notes;
};

/// |c_k| sorted descending.
std::vector<double> nonincreasing_rearrangement(std::span<const Complex> c);

/// Sum_k (c*_k)^p / k^{2-p} over the rearranged moduli, 1 <= p <= 2.
double hardy_sum(std::span<const Complex> c, double p);

/// Merges atoms whose positions coincide within tol (1D); coinciding
/// frequencies are a single almost-periodic coefficient.
measures::AtomicMeasure merge_coincident_frequencies(
    const measures::AtomicMeasure& mu, double tol = 1e-12,
    std::size_t* merged_count = nullptr);

/// Series of L^{-1} integral_{-L}^{L} |sum_k c_k e^{-i a_k x}|^p dx over the
/// grid; Simpson with >= min_per_beat samples per shortest beat period
/// 2 pi / max|a_j - a_k|. Frequencies within 1e-12 are merged first.
asymptotics::AsymptoticSeries besicovitch_norm(
    const measures::AtomicMeasure& freq_atoms, double p,
    std::span<const double> L_grid, int min_per_beat = 8);

/// Sum_i f_i^p w_i / mu(E_{a_i})^{2-p} with E_x the corner set at x; exact.
double fractal_hardy_lhs(const HardySetup& setup);

/// Computes the theorem's LHS and RHS series, the observed constant, and the
/// band-stability flag.
VerdictReport verify_inequality(const HardySetup& setup);

}  // namespace fraclab::hardy
