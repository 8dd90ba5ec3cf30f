#include "fraclab/asymptotics.hpp"

#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace fraclab::asymptotics {

namespace {

double radial_integral(const fourier::SpectrumEvaluator& u, double L, double p,
                       const QuadratureSettings& quad, bool gaussian_weight) {
  const int n = u.dim();
  if (n != 1 && n != 2) {
    throw std::invalid_argument("ball_average: supported for n in {1,2} only");
  }
  if (!(L > 0.0)) throw std::invalid_argument("ball_average: L must be > 0");
  if (!(p >= 1.0)) throw std::invalid_argument("ball_average: p must be >= 1");
  if (quad.radial_samples < 64) {
    throw std::invalid_argument("ball_average: radial_samples must be >= 64");
  }

  const double radius = gaussian_weight ? 6.0 * L : L;
  const auto rule = quadrature::radial_rule(radius, u.spatial_extent(),
                                            quad.radial_samples,
                                            quad.min_per_oscillation,
                                            quad.sample_cap);
  const double inv_two_L2 = 1.0 / (2.0 * L * L);

  std::vector<double> contrib(rule.nodes.size());
  parallel_for(rule.nodes.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double r = rule.nodes[i];
      double value = spherical_average(u, r, p, quad.angular_order);
      if (n == 2) value *= r;
      if (gaussian_weight) value *= std::exp(-r * r * inv_two_L2);
      contrib[i] = rule.weights[i] * value;
    }
  });
  return pairwise_sum(contrib);
}

}  // namespace

void AsymptoticSeries::finalize() {
  if (L_values.size() != values.size() || values.empty()) {
    throw std::invalid_argument("series: L/value size mismatch");
  }
  for (std::size_t i = 1; i < L_values.size(); ++i) {
    if (!(L_values[i] > L_values[i - 1])) {
      throw std::invalid_argument("series: L grid must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!(v >= 0.0)) throw std::invalid_argument("series: negative value");
  }
  const std::size_t start = values.size() / 2;
  liminf_est = *std::min_element(values.begin() + start, values.end());
  limsup_est = *std::max_element(values.begin() + start, values.end());
}

double AsymptoticSeries::band_ratio() const {
  if (!(liminf_est > 0.0)) return std::numeric_limits<double>::infinity();
  return limsup_est / liminf_est;
}

std::vector<double> power_grid(double base, int start, int count) {
  if (!(base > 1.0) || count < 1) {
    throw std::invalid_argument("power_grid: need base > 1 and count >= 1");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    grid[static_cast<std::size_t>(j)] = std::pow(base, start + j);
  }
  return grid;
}

double spherical_average(const fourier::SpectrumEvaluator& u, double r,
                         double p, int quad_order) {
  const int n = u.dim();
  if (!(r >= 0.0)) throw std::invalid_argument("spherical_average: r must be >= 0");
  if (n == 1) {
    Vec xi(1);
    xi[0] = r;
    const double plus = std::pow(std::abs(u.ft(xi)), p);
    xi[0] = -r;
    return plus + std::pow(std::abs(u.ft(xi)), p);
  }
  if (n == 2) {
    if (quad_order < 4) {
      throw std::invalid_argument("spherical_average: quad_order too small");
    }
    std::vector<double> ang(static_cast<std::size_t>(quad_order));
    for (int q = 0; q < quad_order; ++q) {
      const double th = 2.0 * std::numbers::pi * q / quad_order;
      Vec xi(2);
      xi[0] = r * std::cos(th);
      xi[1] = r * std::sin(th);
      ang[static_cast<std::size_t>(q)] = std::pow(std::abs(u.ft(xi)), p);
    }
    return (2.0 * std::numbers::pi / quad_order) * pairwise_sum(ang);
  }
  throw std::invalid_argument("spherical_average: supported for n in {1,2} only");
}

double ball_average(const fourier::SpectrumEvaluator& u, double L, double p,
                    double k, const QuadratureSettings& quad) {
  return std::pow(L, -k) * radial_integral(u, L, p, quad, false);
}

double gaussian_average(const fourier::SpectrumEvaluator& u, double L, double p,
                        double k, const QuadratureSettings& quad) {
  return std::pow(L, -k) * radial_integral(u, L, p, quad, true);
}

namespace {

AsymptoticSeries series_impl(const fourier::SpectrumEvaluator& u,
                             std::span<const double> L_grid, double p, double k,
                             const QuadratureSettings& quad, bool gaussian) {
  if (L_grid.empty()) throw std::invalid_argument("series: empty L grid");
  AsymptoticSeries s;
  s.exponent_k = k;
  s.p = p;
  s.L_values.assign(L_grid.begin(), L_grid.end());
  s.values.resize(L_grid.size());
  for (std::size_t i = 0; i < L_grid.size(); ++i) {
    s.values[i] = gaussian ? gaussian_average(u, L_grid[i], p, k, quad)
                           : ball_average(u, L_grid[i], p, k, quad);
  }
  s.finalize();
  return s;
}

}  // namespace

AsymptoticSeries ball_series(const fourier::SpectrumEvaluator& u,
                             std::span<const double> L_grid, double p, double k,
                             const QuadratureSettings& quad) {
  return series_impl(u, L_grid, p, k, quad, false);
}

AsymptoticSeries gaussian_series(const fourier::SpectrumEvaluator& u,
                                 std::span<const double> L_grid, double p,
                                 double k, const QuadratureSettings& quad) {
  return series_impl(u, L_grid, p, k, quad, true);
}

double sup_ball_norm(const fourier::SpectrumEvaluator& u, double alpha,
                     double p, std::span<const double> L_grid,
                     const QuadratureSettings& quad) {
  if (L_grid.empty()) throw std::invalid_argument("sup_ball_norm: empty grid");
  for (double L : L_grid) {
    if (!(L >= 1.0)) {
      throw std::invalid_argument("sup_ball_norm: grid must lie in [1, inf)");
    }
  }
  const double k = u.dim() - alpha;
  double best = 0.0;
  for (double L : L_grid) {
    best = std::max(best, std::pow(ball_average(u, L, p, k, quad), 1.0 / p));
  }
  return best;
}

namespace {

// Exact x-integral of |mu(Q_delta(x))|^p in one dimension: mu(Q_delta(x)) is
// piecewise constant with breakpoints at a_k -/+ delta.
double cube_mass_integral_1d(const measures::AtomicMeasure& mu, double delta,
                             double p) {
  std::map<double, Complex> events;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double a = mu.location(i)[0];
    events[a - delta] += mu.weight(i);
    events[a + delta] -= mu.weight(i);
  }
  double integral = 0.0;
  Complex acc{0.0, 0.0};
  double prev = 0.0;
  bool first = true;
  for (const auto& [x, jump] : events) {
    if (!first && std::abs(acc) > 0.0) {
      integral += std::pow(std::abs(acc), p) * (x - prev);
    }
    acc += jump;
    prev = x;
    first = false;
  }
  return integral;
}

double cube_mass_integral_2d(const measures::AtomicMeasure& mu, double delta,
                             double p, double grid_res_factor) {
  const Box bb = mu.position_box();
  const double h = delta * grid_res_factor;
  const double x0 = bb.lo[0] - delta, y0 = bb.lo[1] - delta;
  const std::size_t nx =
      static_cast<std::size_t>(std::ceil((bb.hi[0] + delta - x0) / h)) + 1;
  const std::size_t ny =
      static_cast<std::size_t>(std::ceil((bb.hi[1] + delta - y0) / h)) + 1;

  // Bucket atoms at cell side delta; any atom of Q_delta(c) lies within one
  // bucket step of c.
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> buckets;
  auto bucket_of = [&](double x, double y) {
    return std::make_pair(static_cast<std::int64_t>(std::floor((x - x0) / delta)),
                          static_cast<std::int64_t>(std::floor((y - y0) / delta)));
  };
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto a = mu.location(i);
    buckets[bucket_of(a[0], a[1])].push_back(i);
  }

  std::vector<double> rows(nx, 0.0);
  parallel_for(nx, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ix = begin; ix < end; ++ix) {
      const double cx = x0 + (static_cast<double>(ix) + 0.5) * h;
      std::vector<double> row(ny);
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double cy = y0 + (static_cast<double>(iy) + 0.5) * h;
        Complex mass{0.0, 0.0};
        const auto [bx, by] = bucket_of(cx, cy);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
          for (std::int64_t dy = -1; dy <= 1; ++dy) {
            auto it = buckets.find({bx + dx, by + dy});
            if (it == buckets.end()) continue;
            for (std::size_t i : it->second) {
              auto a = mu.location(i);
              // half-open cube: a in (c - delta, c + delta]
              if (a[0] > cx - delta && a[0] <= cx + delta && a[1] > cy - delta &&
                  a[1] <= cy + delta) {
                mass += mu.weight(i);
              }
            }
          }
        }
        row[iy] = std::pow(std::abs(mass), p);
      }
      rows[ix] = pairwise_sum(row);
    }
  });
  return pairwise_sum(rows) * h * h;
}

}  // namespace

double cube_mass_norm(const measures::AtomicMeasure& mu, double alpha, double p,
                      std::span<const double> delta_grid,
                      double grid_res_factor) {
  if (!(p >= 1.0)) throw std::invalid_argument("cube_mass_norm: p must be >= 1");
  if (delta_grid.empty()) {
    throw std::invalid_argument("cube_mass_norm: empty delta grid");
  }
  const int n = mu.dim();
  if (n != 1 && n != 2) {
    throw std::invalid_argument("cube_mass_norm: supported for n in {1,2} only");
  }
  double best = 0.0;
  for (double delta : delta_grid) {
    if (!(delta > 0.0 && delta <= 1.0)) {
      throw std::invalid_argument("cube_mass_norm: deltas must lie in (0,1]");
    }
    const double integral =
        n == 1 ? cube_mass_integral_1d(mu, delta, p)
               : cube_mass_integral_2d(mu, delta, p, grid_res_factor);
    const double norm =
        std::pow(std::pow(delta, -(n + alpha * (p - 1.0))) * integral, 1.0 / p);
    best = std::max(best, norm);
  }
  return best;
}

}  // namespace fraclab::asymptotics
