#pragma once

#include "fraclab/common.hpp"
#include "fraclab/measures.hpp"

#include <span>
#include <vector>

namespace fraclab::geometry {

/// Finite point set standing in for a bounded subset of R^n.
struct PointCloud {
  int dim = 0;
  std::vector<double> pts;  // flat, point i at [i*dim, (i+1)*dim)

  PointCloud() = default;
  PointCloud(int n, std::vector<double> flat);
  static PointCloud from_atoms(const measures::AtomicMeasure& mu);

  std::size_t size() const {
    return pts.size() / static_cast<std::size_t>(dim);
  }
  std::span<const double> point(std::size_t i) const {
    return {pts.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }

  /// Smallest positive nearest-neighbor distance; 0 for a single point.
  double min_gap() const;

  Box bounding_box() const;
  void validate() const;
};

/// Finite-scale Minkowski content scan: values_i = (2 eps_i)^(alpha-n) * |A(eps_i)|,
/// band estimated over the last quartile of the (decreasing) epsilon list.
struct ContentEstimate {
  double alpha = 0.0;
  std::vector<double> epsilons;
  std::vector<double> values;
  double upper_est = 0.0;
  double lower_est = 0.0;
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Lebesgue volume of the eps-neighborhood of the cloud: exact interval
/// merging for n=1; midpoint grid counting (cells of side grid_res, counted
/// when the center lies within eps of the cloud) for n=2. Throws
/// std::invalid_argument when grid_res > eps/4 or n > 2.
double neighborhood_volume(const PointCloud& cloud, double epsilon,
                           double grid_res);

/// Covering witness (closed eps-balls, free centers): the exact sweep
/// construction in 1D, farthest-point traversal from point 0 in 2D. Returns
/// the ball count, an upper bound for the true covering number; center
/// coordinates (flat) land in *centers when given.
int covering_number(const PointCloud& cloud, double epsilon,
                    std::vector<double>* centers = nullptr);

/// Packing witness: greedy maximal family of disjoint open eps-balls with
/// centers in the cloud, by farthest-point traversal at separation 2 eps.
int packing_number(const PointCloud& cloud, double epsilon,
                   std::vector<double>* centers = nullptr);

/// Content scan over a strictly decreasing epsilon list; every epsilon must
/// exceed the cloud's own resolution (min_gap). grid_res per epsilon is
/// eps * grid_res_factor.
ContentEstimate minkowski_content(const PointCloud& cloud, double alpha,
                                  std::vector<double> epsilons,
                                  double grid_res_factor = 0.25);

/// Mass of the corner set {a : a_j <= x_j for all j}. Requires real
/// nonnegative weights.
double truncation_mass(const measures::AtomicMeasure& mu,
                       std::span<const double> x);

}  // namespace fraclab::geometry
