#include "fraclab/geometry.hpp"

#include "fraclab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace fraclab::geometry {

namespace {

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

// Hash grid over 2D points with cell side `cell`; neighbors within one index
// step cover every pair at distance <= cell.
struct BucketGrid2D {
  double cell;
  double ox, oy;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;

  static std::uint64_t key(std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint32_t>(iy);
  }

  BucketGrid2D(const PointCloud& cloud, double cell_side)
      : cell(cell_side) {
    const Box bb = cloud.bounding_box();
    ox = bb.lo[0];
    oy = bb.lo[1];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      auto p = cloud.point(i);
      buckets[key(index(p[0], ox), index(p[1], oy))].push_back(i);
    }
  }

  std::int64_t index(double v, double origin) const {
    return static_cast<std::int64_t>(std::floor((v - origin) / cell));
  }

  template <typename Fn>
  void for_neighbors(double x, double y, Fn&& fn) const {
    const std::int64_t ix = index(x, ox), iy = index(y, oy);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find(key(ix + dx, iy + dy));
        if (it == buckets.end()) continue;
        for (std::size_t i : it->second) fn(i);
      }
    }
  }
};

double volume_1d(const PointCloud& cloud, double epsilon) {
  std::vector<double> xs(cloud.pts);
  std::sort(xs.begin(), xs.end());
  double total = 0.0;
  double lo = xs.front() - epsilon, hi = xs.front() + epsilon;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double a = xs[i] - epsilon, b = xs[i] + epsilon;
    if (a <= hi) {
      hi = std::max(hi, b);
    } else {
      total += hi - lo;
      lo = a;
      hi = b;
    }
  }
  total += hi - lo;
  return total;
}

double volume_2d(const PointCloud& cloud, double epsilon, double grid_res) {
  const Box bb = cloud.bounding_box();
  const double x0 = bb.lo[0] - epsilon, y0 = bb.lo[1] - epsilon;
  const std::size_t nx = static_cast<std::size_t>(
      std::ceil((bb.hi[0] + epsilon - x0) / grid_res)) + 1;
  const std::size_t ny = static_cast<std::size_t>(
      std::ceil((bb.hi[1] + epsilon - y0) / grid_res)) + 1;

  const BucketGrid2D grid(cloud, epsilon);
  const double eps2 = epsilon * epsilon;

  std::vector<std::uint64_t> row_counts(nx, 0);
  parallel_for(nx, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double cx = x0 + (static_cast<double>(i) + 0.5) * grid_res;
      std::uint64_t cnt = 0;
      for (std::size_t jy = 0; jy < ny; ++jy) {
        const double cy = y0 + (static_cast<double>(jy) + 0.5) * grid_res;
        bool inside = false;
        grid.for_neighbors(cx, cy, [&](std::size_t pi) {
          if (inside) return;
          auto p = cloud.point(pi);
          const double dx = p[0] - cx, dy = p[1] - cy;
          if (dx * dx + dy * dy < eps2) inside = true;
        });
        if (inside) ++cnt;
      }
      row_counts[i] = cnt;
    }
  });
  std::uint64_t cells = 0;
  for (std::uint64_t c : row_counts) cells += c;
  return static_cast<double>(cells) * grid_res * grid_res;
}

// Farthest-point traversal from point 0: centers are pairwise >= threshold
// apart. With strict_stop the loop runs while the farthest distance is
// >= threshold (maximal separated set, the packing witness); otherwise while
// it exceeds threshold (closed-ball covering witness).
std::vector<std::size_t> farthest_point_centers(const PointCloud& cloud,
                                                double threshold,
                                                bool strict_stop) {
  const std::size_t n = cloud.size();
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> centers;
  std::size_t next = 0;
  const double thr2 = threshold * threshold;
  while (true) {
    centers.push_back(next);
    auto c = cloud.point(next);
    double far2 = -1.0;
    std::size_t far_idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      best[i] = std::min(best[i], dist2(cloud.point(i), c));
      if (best[i] > far2) {
        far2 = best[i];
        far_idx = i;
      }
    }
    if (strict_stop ? (far2 < thr2) : (far2 <= thr2)) break;
    next = far_idx;
  }
  return centers;
}

// Optimal 1D covering by closed epsilon-intervals with free centers: sweep
// left to right, each center placed epsilon past the first uncovered point.
std::vector<double> stab_cover_1d(const PointCloud& cloud, double epsilon) {
  std::vector<double> xs(cloud.pts);
  std::sort(xs.begin(), xs.end());
  std::vector<double> centers;
  std::size_t i = 0;
  while (i < xs.size()) {
    const double c = xs[i] + epsilon;
    centers.push_back(c);
    while (i < xs.size() && xs[i] <= c + epsilon) ++i;
  }
  return centers;
}

}  // namespace

PointCloud::PointCloud(int n, std::vector<double> flat)
    : dim(n), pts(std::move(flat)) {
  validate();
}

PointCloud PointCloud::from_atoms(const measures::AtomicMeasure& mu) {
  return PointCloud(mu.dim(), mu.flat_locations());
}

void PointCloud::validate() const {
  if (dim < 1) throw std::invalid_argument("cloud: dimension must be >= 1");
  if (pts.empty() || pts.size() % static_cast<std::size_t>(dim) != 0) {
    throw std::invalid_argument("cloud: empty or ragged point data");
  }
  for (double v : pts) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("cloud: non-finite coordinate");
    }
  }
}

double PointCloud::min_gap() const {
  const std::size_t n = size();
  if (n < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  if (dim == 1) {
    std::vector<double> xs(pts);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < n; ++i) {
      const double d = xs[i] - xs[i - 1];
      if (d > 0.0) best = std::min(best, d);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d2 = dist2(point(i), point(j));
        if (d2 > 0.0) best = std::min(best, d2);
      }
    }
    best = std::sqrt(best);
  }
  return std::isfinite(best) ? best : 0.0;
}

Box PointCloud::bounding_box() const {
  Vec lo(dim), hi(dim);
  for (int j = 0; j < dim; ++j) lo[j] = hi[j] = pts[static_cast<std::size_t>(j)];
  for (std::size_t i = 1; i < size(); ++i) {
    auto p = point(i);
    for (int j = 0; j < dim; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  return Box{std::move(lo), std::move(hi)};
}

double unit_ball_volume(int n) {
  // Omega_n = pi^(n/2) / Gamma(n/2 + 1)
  return std::pow(std::numbers::pi, 0.5 * n) /
         std::tgamma(0.5 * n + 1.0);
}

double neighborhood_volume(const PointCloud& cloud, double epsilon,
                           double grid_res) {
  cloud.validate();
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("neighborhood_volume: epsilon must be > 0");
  }
  if (cloud.dim == 1) return volume_1d(cloud, epsilon);
  if (cloud.dim != 2) {
    throw std::invalid_argument(
        "neighborhood_volume: grid method supports n in {1,2} only");
  }
  if (!(grid_res > 0.0) || grid_res > epsilon / 4.0) {
    throw std::invalid_argument(
        "neighborhood_volume: resolution too coarse (need grid_res <= epsilon/4)");
  }
  return volume_2d(cloud, epsilon, grid_res);
}

int covering_number(const PointCloud& cloud, double epsilon,
                    std::vector<double>* centers) {
  cloud.validate();
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("covering_number: epsilon must be > 0");
  }
  if (cloud.dim == 1) {
    auto c = stab_cover_1d(cloud, epsilon);
    if (centers) *centers = c;
    return static_cast<int>(c.size());
  }
  auto idx = farthest_point_centers(cloud, epsilon, /*strict_stop=*/false);
  if (centers) {
    centers->clear();
    for (std::size_t i : idx) {
      auto p = cloud.point(i);
      centers->insert(centers->end(), p.begin(), p.end());
    }
  }
  return static_cast<int>(idx.size());
}

int packing_number(const PointCloud& cloud, double epsilon,
                   std::vector<double>* centers) {
  cloud.validate();
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("packing_number: epsilon must be > 0");
  }
  // Disjoint open eps-balls == centers pairwise >= 2 eps apart; the greedy
  // maximal family doubles as a 2 eps covering.
  auto idx = farthest_point_centers(cloud, 2.0 * epsilon, /*strict_stop=*/true);
  if (centers) {
    centers->clear();
    for (std::size_t i : idx) {
      auto p = cloud.point(i);
      centers->insert(centers->end(), p.begin(), p.end());
    }
  }
  return static_cast<int>(idx.size());
}

ContentEstimate minkowski_content(const PointCloud& cloud, double alpha,
                                  std::vector<double> epsilons,
                                  double grid_res_factor) {
  cloud.validate();
  if (epsilons.empty()) {
    throw std::invalid_argument("minkowski_content: empty epsilon list");
  }
  if (!(alpha >= 0.0 && alpha <= cloud.dim)) {
    throw std::invalid_argument("minkowski_content: alpha outside [0, n]");
  }
  for (std::size_t i = 1; i < epsilons.size(); ++i) {
    if (!(epsilons[i] < epsilons[i - 1])) {
      throw std::invalid_argument(
          "minkowski_content: epsilons must be strictly decreasing");
    }
  }
  const double resolution = cloud.min_gap();
  if (epsilons.back() <= resolution) {
    throw std::invalid_argument(
        "minkowski_content: epsilon below cloud resolution");
  }

  ContentEstimate est;
  est.alpha = alpha;
  est.epsilons = std::move(epsilons);
  est.values.resize(est.epsilons.size());
  for (std::size_t i = 0; i < est.epsilons.size(); ++i) {
    const double eps = est.epsilons[i];
    const double vol =
        neighborhood_volume(cloud, eps, eps * grid_res_factor);
    est.values[i] = std::pow(2.0 * eps, alpha - cloud.dim) * vol;
  }
  // Only the tail of the scan looks asymptotic; finite clouds flatten out
  // below their own resolution.
  const std::size_t count = est.values.size();
  const std::size_t start = count - std::max<std::size_t>(1, count / 4);
  est.upper_est = *std::max_element(est.values.begin() + start, est.values.end());
  est.lower_est = *std::min_element(est.values.begin() + start, est.values.end());
  return est;
}

double truncation_mass(const measures::AtomicMeasure& mu,
                       std::span<const double> x) {
  if (static_cast<int>(x.size()) != mu.dim()) {
    throw std::invalid_argument("truncation_mass: point dimension mismatch");
  }
  if (!mu.has_real_nonnegative_weights()) {
    throw std::invalid_argument(
        "truncation_mass: measure must have real nonnegative weights");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto a = mu.location(i);
    bool inside = true;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (a[j] > x[j]) {
        inside = false;
        break;
      }
    }
    if (inside) total += mu.weight(i).real();
  }
  return total;
}

}  // namespace fraclab::geometry
