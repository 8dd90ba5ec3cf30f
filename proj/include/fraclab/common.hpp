#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraclab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Raised when an operation would exceed a configured atom or sample budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a recursive transform hits its depth cap before converging.
class DepthExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by verify_inequality when a setup violates a theorem precondition.
/// The message names the violated range, e.g. "p in [1,2]".
class SetupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Axis-aligned box, lo(j) <= hi(j) for every coordinate.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }

  double diameter() const { return (hi - lo).norm(); }

  /// Largest |x| over the box (attained at a corner).
  double max_abs_corner() const {
    double s = 0.0;
    for (int j = 0; j < dim(); ++j) {
      s += std::pow(std::max(std::abs(lo[j]), std::abs(hi[j])), 2);
    }
    return std::sqrt(s);
  }

  bool contains(const Vec& x, double slack = 0.0) const {
    for (int j = 0; j < dim(); ++j) {
      if (x[j] < lo[j] - slack || x[j] > hi[j] + slack) return false;
    }
    return true;
  }

  /// All 2^n corners, in lexicographic bit order.
  std::vector<Vec> corners() const {
    const int n = dim();
    std::vector<Vec> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Vec c(n);
      for (int j = 0; j < n; ++j) c[j] = (mask >> j & 1) ? hi[j] : lo[j];
      out.push_back(std::move(c));
    }
    return out;
  }

  void validate() const {
    if (lo.size() != hi.size() || lo.size() == 0) {
      throw std::invalid_argument("box: lo/hi dimension mismatch");
    }
    for (int j = 0; j < dim(); ++j) {
      if (!(lo[j] <= hi[j])) throw std::invalid_argument("box: lo > hi");
      if (!std::isfinite(lo[j]) || !std::isfinite(hi[j])) {
        throw std::invalid_argument("box: non-finite bound");
      }
    }
  }
};

}  // namespace fraclab
