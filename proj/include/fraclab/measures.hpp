#pragma once

#include "fraclab/common.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fraclab::measures {

/// Contracting similarity x -> ratio * rotation * x + translation.
struct Similitude {
  double ratio = 0.0;
  Mat rotation;     // n x n orthogonal
  Vec translation;  // n-vector

  int dim() const { return static_cast<int>(translation.size()); }
  Vec apply(const Vec& x) const { return ratio * (rotation * x) + translation; }

  /// Unique fixed point (I - ratio*rotation)^{-1} translation.
  Vec fixed_point() const;

  /// Throws std::invalid_argument unless 0 < ratio < 1 and the rotation is
  /// orthogonal entrywise within 1e-12.
  void validate() const;
};

/// Self-similar probability measure: Sum_j weight_j * (mu o map_j^{-1}).
/// Immutable after construction; safe to share across threads.
class IFSMeasure {
 public:
  /// weights may be empty (equal weights 1/m). bounding_box may be omitted
  /// when an invariant box is derivable (always possible without rotations);
  /// a user-supplied box must be mapped into itself by every map, checked on
  /// its corners.
  IFSMeasure(std::vector<Similitude> maps, std::vector<double> weights = {},
             std::optional<Box> bounding_box = std::nullopt,
             bool osc_asserted = false);

  int dim() const { return maps_.front().dim(); }
  std::size_t map_count() const { return maps_.size(); }
  const std::vector<Similitude>& maps() const { return maps_; }
  const std::vector<double>& weights() const { return weights_; }
  double dimension_alpha() const { return alpha_; }
  const Box& bounding_box() const { return box_; }
  bool osc_asserted() const { return osc_asserted_; }

  /// True when every map shares one (ratio, rotation); the Fourier recursion
  /// then collapses to a product of per-level factors.
  bool uniform_similarity() const { return uniform_similarity_; }

 private:
  std::vector<Similitude> maps_;
  std::vector<double> weights_;
  double alpha_ = 0.0;
  Box box_;
  bool osc_asserted_ = false;
  bool uniform_similarity_ = false;
};

/// Finite list of (location, complex weight) atoms with flat storage.
class AtomicMeasure {
 public:
  AtomicMeasure(int dim, std::vector<double> flat_locations,
                std::vector<Complex> weights);

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> location(std::size_t i) const {
    return {locations_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& flat_locations() const { return locations_; }
  Complex weight(std::size_t i) const { return weights_[i]; }
  const std::vector<Complex>& weights() const { return weights_; }
  Complex total_mass() const { return total_mass_; }

  /// Tight axis-aligned box around the atom locations.
  Box position_box() const;

  /// True when every weight is real (within |Im| <= tol) and >= 0.
  bool has_real_nonnegative_weights(double tol = 0.0) const;

 private:
  int dim_;
  std::vector<double> locations_;
  std::vector<Complex> weights_;
  Complex total_mass_;
};

/// AtomicMeasure carrying a nonnegative density sample per atom (f d mu).
struct WeightedMeasure {
  AtomicMeasure base;
  std::vector<double> density;

  WeightedMeasure(AtomicMeasure base_in, std::vector<double> density_in);

  /// Per-atom effective weight f_i * c_i.
  Complex effective_weight(std::size_t i) const {
    return density[i] * base.weight(i);
  }

  /// The measure with density folded into the weights.
  AtomicMeasure folded() const;
};

/// Unique alpha > 0 with Sum_j ratio_j^alpha = 1, by monotone bisection to
/// absolute tolerance 1e-12. Requires >= 2 maps, every ratio in (0,1).
double similarity_dimension(const std::vector<Similitude>& maps);

/// |Sum_j ratio_j^alpha - 1|.
double moran_residual(const std::vector<Similitude>& maps, double alpha);

inline constexpr std::size_t kDefaultAtomBudget = std::size_t{1} << 24;

/// Depth-d cylinder discretization: one atom per length-d word w, located at
/// S_{w_1}(S_{w_2}(...S_{w_d}(x0))) with x0 the fixed point of map 1 and
/// weight prod_t weight_{w_t}. Throws BudgetError when m^depth exceeds the
/// budget. Atom order is lexicographic in the word, first letter major, so
/// pushing level d through map j lands exactly on a contiguous block of
/// level d+1.
AtomicMeasure cylinder_approx(const IFSMeasure& measure, int depth,
                              std::size_t budget = kDefaultAtomBudget);

/// Chaos-game sampling of the invariant measure: deterministic per seed,
/// 64 burn-in iterations, returns count points flat (point i occupies
/// [i*n, (i+1)*n)). All points lie in the bounding box.
std::vector<double> chaos_game_sample(const IFSMeasure& measure,
                                      std::size_t count, std::uint64_t seed);

}  // namespace fraclab::measures
