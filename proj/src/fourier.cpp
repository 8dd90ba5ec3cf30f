#include "fraclab/fourier.hpp"

#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fraclab::fourier {

namespace {

double dot(std::span<const double> a, const Vec& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[static_cast<int>(j)];
  return s;
}

// One level of the self-similar recursion without the recursive factor.
Complex level_factor(const measures::IFSMeasure& mu, const Vec& eta) {
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < mu.map_count(); ++j) {
    const double phase = -mu.maps()[j].translation.dot(eta);
    acc += mu.weights()[j] * std::polar(1.0, phase);
  }
  return acc;
}

Complex recursive_ft(const measures::IFSMeasure& mu, const Vec& eta,
                     double sup_abs, double tol, int depth, int max_depth) {
  if (eta.norm() * sup_abs <= tol) return Complex{1.0, 0.0};
  if (depth >= max_depth) {
    throw DepthExceededError(
        "ft_self_similar: max_depth reached before the base-case criterion");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < mu.map_count(); ++j) {
    const auto& s = mu.maps()[j];
    const double phase = -s.translation.dot(eta);
    const Vec child = s.ratio * (s.rotation.transpose() * eta);
    acc += mu.weights()[j] * std::polar(1.0, phase) *
           recursive_ft(mu, child, sup_abs, tol, depth + 1, max_depth);
  }
  return acc;
}

// Integrand of the bump normalization/transform quadratures.
double bump_profile(double r2) { return std::exp(-1.0 / (1.0 - r2)); }

double simpson_on_unit(const std::function<double(double)>& f,
                       std::size_t panels) {
  const auto rule = quadrature::uniform_simpson(0.0, 1.0, panels);
  std::vector<double> contrib(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    contrib[i] = rule.weights[i] * f(rule.nodes[i]);
  }
  return pairwise_sum(contrib);
}

}  // namespace

Complex ft_atomic(const measures::AtomicMeasure& mu, const Vec& xi) {
  if (xi.size() != mu.dim()) {
    throw std::invalid_argument("ft_atomic: frequency dimension mismatch");
  }
  std::vector<Complex> terms(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    terms[k] = mu.weight(k) * std::polar(1.0, -dot(mu.location(k), xi));
  }
  return pairwise_sum(std::span<const Complex>(terms));
}

Complex ft_atomic(const measures::WeightedMeasure& mu, const Vec& xi) {
  if (xi.size() != mu.base.dim()) {
    throw std::invalid_argument("ft_atomic: frequency dimension mismatch");
  }
  std::vector<Complex> terms(mu.base.size());
  for (std::size_t k = 0; k < mu.base.size(); ++k) {
    terms[k] =
        mu.effective_weight(k) * std::polar(1.0, -dot(mu.base.location(k), xi));
  }
  return pairwise_sum(std::span<const Complex>(terms));
}

Complex ft_self_similar(const measures::IFSMeasure& mu, const Vec& xi,
                        const TransformRequest& req) {
  req.validate();
  if (xi.size() != mu.dim()) {
    throw std::invalid_argument("ft_self_similar: frequency dimension mismatch");
  }
  if (!xi.allFinite()) {
    throw std::invalid_argument("ft_self_similar: non-finite frequency");
  }
  const double sup_abs = mu.bounding_box().max_abs_corner();

  if (mu.uniform_similarity()) {
    // One shared (s, R): the recursion visits a single chain of arguments,
    // so the transform is a plain product of level factors.
    const auto& first = mu.maps().front();
    Complex product{1.0, 0.0};
    Vec eta = xi;
    int depth = 0;
    while (eta.norm() * sup_abs > req.tol) {
      if (depth >= req.max_depth) {
        throw DepthExceededError(
            "ft_self_similar: max_depth reached before the base-case criterion");
      }
      product *= level_factor(mu, eta);
      eta = first.ratio * (first.rotation.transpose() * eta);
      ++depth;
    }
    return product;
  }
  return recursive_ft(mu, xi, sup_abs, req.tol, 0, req.max_depth);
}

AtomicSpectrum::AtomicSpectrum(measures::AtomicMeasure mu)
    : mu_(std::move(mu)), extent_(mu_.position_box().diameter()) {}

AtomicSpectrum::AtomicSpectrum(const measures::WeightedMeasure& mu)
    : mu_(mu.folded()), extent_(mu_.position_box().diameter()) {}

Complex AtomicSpectrum::ft(const Vec& xi) const { return ft_atomic(mu_, xi); }

SelfSimilarSpectrum::SelfSimilarSpectrum(measures::IFSMeasure mu,
                                         TransformRequest req)
    : mu_(std::move(mu)), req_(req) {
  req_.validate();
}

Complex SelfSimilarSpectrum::ft(const Vec& xi) const {
  return ft_self_similar(mu_, xi, req_);
}

double SelfSimilarSpectrum::spatial_extent() const {
  return mu_.bounding_box().diameter();
}

CylinderSpectrum::CylinderSpectrum(measures::IFSMeasure mu, int depth,
                                   double scale)
    : mu_(std::move(mu)), depth_(depth), scale_(scale) {
  if (!mu_.uniform_similarity()) {
    throw std::invalid_argument(
        "cylinder spectrum: requires a shared (ratio, rotation) IFS");
  }
  if (depth_ < 0) throw std::invalid_argument("cylinder spectrum: depth >= 0");
  const auto& first = mu_.maps().front();
  Vec x = mu_.maps().front().fixed_point();
  for (int t = 0; t < depth_; ++t) x = first.ratio * (first.rotation * x);
  base_point_ = std::move(x);
}

Complex CylinderSpectrum::ft(const Vec& xi) const {
  const auto& first = mu_.maps().front();
  Complex product = scale_ * std::polar(1.0, -base_point_.dot(xi));
  Vec eta = xi;
  for (int t = 0; t < depth_; ++t) {
    product *= level_factor(mu_, eta);
    eta = first.ratio * (first.rotation.transpose() * eta);
  }
  return product;
}

double CylinderSpectrum::spatial_extent() const {
  return mu_.bounding_box().diameter();
}

Mollifier::Mollifier(int dim) : dim_(dim) {
  if (dim_ != 1 && dim_ != 2) {
    throw std::invalid_argument("mollifier: supported for n in {1,2} only");
  }
  constexpr std::size_t kPanels = 512;
  if (dim_ == 1) {
    // integral over [-1,1] is twice the half-line integral
    const double total =
        2.0 * simpson_on_unit([](double x) { return bump_profile(x * x); },
                              kPanels);
    norm_const_ = 1.0 / total;
    l2_sq_ = norm_const_ * norm_const_ * 2.0 *
             simpson_on_unit(
                 [](double x) { return std::exp(-2.0 / (1.0 - x * x)); },
                 kPanels);
  } else {
    const double total =
        2.0 * std::numbers::pi *
        simpson_on_unit([](double r) { return bump_profile(r * r) * r; },
                        kPanels);
    norm_const_ = 1.0 / total;
    l2_sq_ = norm_const_ * norm_const_ * 2.0 * std::numbers::pi *
             simpson_on_unit(
                 [](double r) { return std::exp(-2.0 / (1.0 - r * r)) * r; },
                 kPanels);
  }
}

double Mollifier::hat(double rho) const {
  rho = std::abs(rho);
  // >= 16 samples per oscillation of the phase over the unit radius
  const std::size_t panels = static_cast<std::size_t>(
      std::max(256.0, std::ceil(8.0 * rho / std::numbers::pi) + 64.0));
  if (dim_ == 1) {
    return 2.0 * norm_const_ *
           simpson_on_unit(
               [rho](double x) {
                 return bump_profile(x * x) * std::cos(rho * x);
               },
               panels);
  }
  return 2.0 * std::numbers::pi * norm_const_ *
         simpson_on_unit(
             [rho](double r) {
               return bump_profile(r * r) * std::cyl_bessel_j(0.0, rho * r) * r;
             },
             panels);
}

double Mollifier::cutoff_radius(double cut) const {
  if (!(cut > 0.0)) throw std::invalid_argument("mollifier: cut must be > 0");
  constexpr double kStep = 0.5;
  constexpr int kWindow = 48;  // trailing samples that must all stay under cut
  constexpr double kMax = 4096.0;
  int under = 0;
  for (double t = 0.0; t <= kMax; t += kStep) {
    if (std::abs(hat(t)) < cut) {
      if (++under >= kWindow) return std::max(kStep, t - kWindow * kStep);
    } else {
      under = 0;
    }
  }
  throw std::invalid_argument("mollifier: cut too small to locate a cutoff");
}

double mollified_l2(const measures::AtomicMeasure& mu, double epsilon,
                    double width_cut, std::size_t sample_cap) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("mollified_l2: epsilon must lie in (0,1]");
  }
  const int n = mu.dim();
  if (n != 1 && n != 2) {
    throw std::invalid_argument("mollified_l2: supported for n in {1,2} only");
  }

  const Mollifier chi(n);
  const double radius = chi.cutoff_radius(width_cut) / epsilon;
  const double extent = mu.position_box().diameter();
  const auto rule = quadrature::radial_rule(radius, extent, 512, 8, sample_cap);

  constexpr int kAngular = 64;
  if (n == 2 && rule.nodes.size() * kAngular > sample_cap) {
    throw BudgetError("mollified_l2: truncated domain exceeds the sample cap");
  }

  std::vector<double> contrib(rule.nodes.size());
  parallel_for(rule.nodes.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double r = rule.nodes[i];
      const double window = std::pow(chi.hat(epsilon * r), 2);
      double shell;
      if (n == 1) {
        Vec xi(1);
        xi[0] = r;
        const double plus = std::norm(ft_atomic(mu, xi));
        xi[0] = -r;
        shell = plus + std::norm(ft_atomic(mu, xi));
      } else {
        std::vector<double> ang(kAngular);
        for (int q = 0; q < kAngular; ++q) {
          const double th = 2.0 * std::numbers::pi * q / kAngular;
          Vec xi(2);
          xi[0] = r * std::cos(th);
          xi[1] = r * std::sin(th);
          ang[static_cast<std::size_t>(q)] = std::norm(ft_atomic(mu, xi));
        }
        shell = (2.0 * std::numbers::pi / kAngular) * pairwise_sum(ang) * r;
      }
      contrib[i] = rule.weights[i] * window * shell;
    }
  });
  const double freq_integral = pairwise_sum(contrib);
  return freq_integral / std::pow(2.0 * std::numbers::pi, n);
}

}  // namespace fraclab::fourier
