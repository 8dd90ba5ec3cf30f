#include "fraclab/measures.hpp"

#include "fraclab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fraclab::measures {

namespace {

constexpr double kOrthTol = 1e-12;
constexpr double kWeightSumTol = 1e-12;
constexpr double kMoranTol = 1e-10;
constexpr double kBoxSlack = 1e-9;

// Induced sup-norm of a matrix (max absolute row sum).
double inf_norm(const Mat& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    best = std::max(best, m.row(i).cwiseAbs().sum());
  }
  return best;
}

std::vector<double> equal_weights(std::size_t m) {
  return std::vector<double>(m, 1.0 / static_cast<double>(m));
}

// Smallest box [c-h, c+h]^n that every map provably sends into itself:
// h >= |S_j(c)-c|_inf / (1 - ratio_j*||R_j||_inf). Fails when some map does
// not contract the sup norm; the caller must then supply a box.
Box derive_invariant_box(const std::vector<Similitude>& maps) {
  const int n = maps.front().dim();
  Vec center = Vec::Zero(n);
  for (const auto& s : maps) center += s.fixed_point();
  center /= static_cast<double>(maps.size());

  double h = 0.0;
  for (const auto& s : maps) {
    const double kappa = s.ratio * inf_norm(s.rotation);
    if (kappa >= 1.0) {
      throw std::invalid_argument(
          "ifs: cannot derive an invariant box (map does not contract the "
          "sup norm); supply a bounding box explicitly");
    }
    const double d = (s.apply(center) - center).cwiseAbs().maxCoeff();
    h = std::max(h, d / (1.0 - kappa));
  }
  Box box{center.array() - h, center.array() + h};
  return box;
}

}  // namespace

Vec Similitude::fixed_point() const {
  const int n = dim();
  Mat a = Mat::Identity(n, n) - ratio * rotation;
  return a.partialPivLu().solve(translation);
}

void Similitude::validate() const {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("similitude: ratio must lie in (0,1)");
  }
  const int n = dim();
  if (rotation.rows() != n || rotation.cols() != n || n < 1) {
    throw std::invalid_argument("similitude: rotation/translation shape mismatch");
  }
  Mat gram = rotation.transpose() * rotation;
  if ((gram - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > kOrthTol) {
    throw std::invalid_argument("similitude: rotation is not orthogonal");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(translation[j])) {
      throw std::invalid_argument("similitude: non-finite translation");
    }
  }
}

IFSMeasure::IFSMeasure(std::vector<Similitude> maps,
                       std::vector<double> weights,
                       std::optional<Box> bounding_box, bool osc_asserted)
    : maps_(std::move(maps)),
      weights_(std::move(weights)),
      osc_asserted_(osc_asserted) {
  if (maps_.size() < 2) {
    throw std::invalid_argument("ifs: need at least 2 maps");
  }
  const int n = maps_.front().dim();
  for (const auto& s : maps_) {
    s.validate();
    if (s.dim() != n) throw std::invalid_argument("ifs: mixed dimensions");
  }
  if (weights_.empty()) weights_ = equal_weights(maps_.size());
  if (weights_.size() != maps_.size()) {
    throw std::invalid_argument("ifs: one weight per map required");
  }
  double wsum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0)) throw std::invalid_argument("ifs: weights must be positive");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kWeightSumTol) {
    throw std::invalid_argument("ifs: weights must sum to 1");
  }

  alpha_ = similarity_dimension(maps_);
  if (moran_residual(maps_, alpha_) > kMoranTol) {
    throw std::invalid_argument("ifs: Moran equation residual too large");
  }

  box_ = bounding_box ? *bounding_box : derive_invariant_box(maps_);
  box_.validate();
  if (box_.dim() != n) throw std::invalid_argument("ifs: box dimension mismatch");
  for (const auto& s : maps_) {
    for (const auto& corner : box_.corners()) {
      if (!box_.contains(s.apply(corner), kBoxSlack)) {
        throw std::invalid_argument(
            "ifs: bounding box is not invariant (a map sends a corner outside)");
      }
    }
  }

  uniform_similarity_ = true;
  for (const auto& s : maps_) {
    if (std::abs(s.ratio - maps_.front().ratio) > 1e-15 ||
        (s.rotation - maps_.front().rotation).cwiseAbs().maxCoeff() > 1e-15) {
      uniform_similarity_ = false;
      break;
    }
  }
}

AtomicMeasure::AtomicMeasure(int dim, std::vector<double> flat_locations,
                             std::vector<Complex> weights)
    : dim_(dim),
      locations_(std::move(flat_locations)),
      weights_(std::move(weights)) {
  if (dim_ < 1) throw std::invalid_argument("atomic: dimension must be >= 1");
  if (weights_.empty() ||
      locations_.size() != weights_.size() * static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("atomic: locations/weights size mismatch");
  }
  for (double x : locations_) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("atomic: non-finite atom location");
    }
  }
  total_mass_ = pairwise_sum(std::span<const Complex>(weights_));
}

Box AtomicMeasure::position_box() const {
  Vec lo(dim_), hi(dim_);
  for (int j = 0; j < dim_; ++j) {
    lo[j] = hi[j] = locations_[static_cast<std::size_t>(j)];
  }
  for (std::size_t i = 1; i < size(); ++i) {
    auto p = location(i);
    for (int j = 0; j < dim_; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  return Box{std::move(lo), std::move(hi)};
}

bool AtomicMeasure::has_real_nonnegative_weights(double tol) const {
  for (const Complex& w : weights_) {
    if (std::abs(w.imag()) > tol || w.real() < 0.0) return false;
  }
  return true;
}

WeightedMeasure::WeightedMeasure(AtomicMeasure base_in,
                                 std::vector<double> density_in)
    : base(std::move(base_in)), density(std::move(density_in)) {
  if (density.size() != base.size()) {
    throw std::invalid_argument("weighted: one density value per atom required");
  }
  for (double f : density) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw std::invalid_argument("weighted: density values must be >= 0");
    }
  }
}

AtomicMeasure WeightedMeasure::folded() const {
  std::vector<Complex> w(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) w[i] = effective_weight(i);
  return AtomicMeasure(base.dim(), base.flat_locations(), std::move(w));
}

double similarity_dimension(const std::vector<Similitude>& maps) {
  if (maps.size() < 2) {
    throw std::invalid_argument("similarity_dimension: need at least 2 maps");
  }
  for (const auto& s : maps) {
    if (!(s.ratio > 0.0 && s.ratio < 1.0)) {
      throw std::invalid_argument("similarity_dimension: ratio outside (0,1)");
    }
  }
  auto moran = [&maps](double a) {
    double sum = 0.0;
    for (const auto& s : maps) sum += std::pow(s.ratio, a);
    return sum;
  };
  // moran is strictly decreasing with moran(0) = m >= 2; bracket then bisect.
  double lo = 0.0, hi = 1.0;
  while (moran(hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("similarity_dimension: no bracket");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (moran(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double moran_residual(const std::vector<Similitude>& maps, double alpha) {
  double sum = 0.0;
  for (const auto& s : maps) sum += std::pow(s.ratio, alpha);
  return std::abs(sum - 1.0);
}

AtomicMeasure cylinder_approx(const IFSMeasure& measure, int depth,
                              std::size_t budget) {
  if (depth < 0) throw std::invalid_argument("cylinder_approx: depth must be >= 0");
  const std::size_t m = measure.map_count();
  const int n = measure.dim();

  std::size_t count = 1;
  for (int d = 0; d < depth; ++d) {
    if (count > budget / m) {
      throw BudgetError("cylinder_approx: atom budget exceeded; reduce depth");
    }
    count *= m;
  }

  const Vec x0 = measure.maps().front().fixed_point();

  // Level-by-level: each level-(t+1) point is literally S_j applied to a
  // level-t point, so level d pushed through map j reappears bitwise in
  // level d+1.
  std::vector<double> pts(x0.data(), x0.data() + n);
  std::vector<Complex> wts{Complex{1.0, 0.0}};
  for (int t = 0; t < depth; ++t) {
    const std::size_t cur = wts.size();
    std::vector<double> next_pts(cur * m * static_cast<std::size_t>(n));
    std::vector<Complex> next_wts(cur * m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto& s = measure.maps()[j];
      const double pj = measure.weights()[j];
      for (std::size_t i = 0; i < cur; ++i) {
        Eigen::Map<const Vec> x(pts.data() + i * static_cast<std::size_t>(n), n);
        Vec y = s.apply(x);
        const std::size_t idx = j * cur + i;
        std::copy(y.data(), y.data() + n,
                  next_pts.begin() +
                      static_cast<std::ptrdiff_t>(idx * static_cast<std::size_t>(n)));
        next_wts[idx] = pj * wts[i];
      }
    }
    pts = std::move(next_pts);
    wts = std::move(next_wts);
  }
  return AtomicMeasure(n, std::move(pts), std::move(wts));
}

std::vector<double> chaos_game_sample(const IFSMeasure& measure,
                                      std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("chaos_game_sample: count must be >= 1");
  const int n = measure.dim();
  const std::size_t m = measure.map_count();

  std::vector<double> cumulative(m);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    acc += measure.weights()[j];
    cumulative[j] = acc;
  }
  cumulative.back() = 1.0;

  // mt19937_64 output is fully specified, and the 53-bit uniform plus
  // inverse-CDF map below avoids implementation-defined distributions.
  std::mt19937_64 rng(seed);
  auto next_map = [&]() -> std::size_t {
    const double u =
        static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::size_t j = 0;
    while (j + 1 < m && u >= cumulative[j]) ++j;
    return j;
  };

  Vec x = measure.maps().front().fixed_point();
  for (int burn = 0; burn < 64; ++burn) x = measure.maps()[next_map()].apply(x);

  std::vector<double> out(count * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < count; ++i) {
    x = measure.maps()[next_map()].apply(x);
    std::copy(x.data(), x.data() + n,
              out.begin() + static_cast<std::ptrdiff_t>(
                                i * static_cast<std::size_t>(n)));
  }
  return out;
}

}  // namespace fraclab::measures
