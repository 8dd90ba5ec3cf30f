#include "fraclab/quadrature.hpp"

#include "fraclab/common.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fraclab::quadrature {

Rule from_breakpoints(const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("quadrature: need >= 2 edges");
  const std::size_t panels = edges.size() - 1;
  Rule rule;
  rule.nodes.resize(2 * panels + 1);
  rule.weights.assign(2 * panels + 1, 0.0);
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = edges[i], b = edges[i + 1];
    if (!(b > a)) throw std::invalid_argument("quadrature: edges not increasing");
    const double h = b - a;
    rule.nodes[2 * i] = a;
    rule.nodes[2 * i + 1] = 0.5 * (a + b);
    rule.weights[2 * i] += h / 6.0;
    rule.weights[2 * i + 1] += 4.0 * h / 6.0;
    rule.weights[2 * i + 2] += h / 6.0;
  }
  rule.nodes.back() = edges.back();
  return rule;
}

Rule uniform_simpson(double a, double b, std::size_t panels) {
  std::vector<double> edges(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
  }
  edges.back() = b;
  return from_breakpoints(edges);
}

Rule radial_rule(double radius, double extent, int base_panels,
                 int min_per_osc, std::size_t node_cap) {
  if (!(radius > 0.0)) throw std::invalid_argument("quadrature: radius must be > 0");
  base_panels = std::max(base_panels, 2);

  std::vector<double> edges;
  if (extent <= 0.0) {
    if (2 * static_cast<std::size_t>(base_panels) + 1 > node_cap) {
      throw BudgetError("quadrature: radial rule exceeds its node budget");
    }
    return uniform_simpson(0.0, radius, static_cast<std::size_t>(base_panels));
  }

  const double wavelength = 2.0 * std::numbers::pi / extent;
  const double r_cross = std::min(wavelength, radius);

  // Geometric section below one oscillation.
  constexpr int kShells = 16;
  constexpr int kPanelsPerShell = 4;
  edges.push_back(0.0);
  for (int j = kShells; j >= 1; --j) {
    const double lo = r_cross * std::ldexp(1.0, -j);
    const double hi = r_cross * std::ldexp(1.0, -(j - 1));
    if (edges.back() >= lo) continue;
    for (int t = 1; t <= kPanelsPerShell; ++t) {
      edges.push_back(lo + (hi - lo) * t / kPanelsPerShell);
    }
  }
  if (edges.back() < r_cross) edges.push_back(r_cross);

  // Uniform section at >= min_per_osc samples per oscillation.
  if (radius > r_cross) {
    const double h_osc = wavelength / std::max(min_per_osc, 1);
    const std::size_t panels = std::max<std::size_t>(
        static_cast<std::size_t>(base_panels),
        static_cast<std::size_t>(std::ceil((radius - r_cross) / h_osc)));
    if (panels > node_cap) {
      throw BudgetError("quadrature: radial rule exceeds its node budget");
    }
    const std::size_t first = edges.size();
    for (std::size_t i = 1; i <= panels; ++i) {
      edges.push_back(r_cross + (radius - r_cross) * static_cast<double>(i) /
                                    static_cast<double>(panels));
    }
    edges[first + panels - 1] = radius;
  }

  if (2 * edges.size() + 1 > node_cap) {
    throw BudgetError("quadrature: radial rule exceeds its node budget");
  }
  return from_breakpoints(edges);
}

}  // namespace fraclab::quadrature
