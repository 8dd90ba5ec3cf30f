#pragma once

#include <cstddef>
#include <vector>

namespace fraclab::quadrature {

/// Nodes and weights for a composite Simpson rule; integral of f is
/// sum_i weights[i] * f(nodes[i]).
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite Simpson over consecutive [edges[i], edges[i+1]] panels.
Rule from_breakpoints(const std::vector<double>& edges);

/// Uniform composite Simpson on [a, b] with the given panel count.
Rule uniform_simpson(double a, double b, std::size_t panels);

/// Radial rule on [0, R] for integrands oscillating at wavelength
/// 2*pi/extent: dyadic geometric panels below one oscillation, then a
/// uniform section at >= min_per_osc samples per oscillation (never fewer
/// than base_panels in total). extent <= 0 disables the oscillation rule.
/// Throws BudgetError when the rule would exceed node_cap nodes.
Rule radial_rule(double radius, double extent, int base_panels,
                 int min_per_osc, std::size_t node_cap);

}  // namespace fraclab::quadrature
