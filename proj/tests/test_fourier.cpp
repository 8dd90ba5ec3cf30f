#include "fraclab/fourier.hpp"

#include "fraclab/measures.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fraclab;
using namespace fraclab::fourier;

namespace {

measures::Similitude line_map(double ratio, double translate) {
  measures::Similitude s;
  s.ratio = ratio;
  s.rotation = Mat::Identity(1, 1);
  s.translation = Vec(1);
  s.translation[0] = translate;
  return s;
}

measures::IFSMeasure cantor_measure() {
  return measures::IFSMeasure(
      {line_map(1.0 / 3.0, 0.0), line_map(1.0 / 3.0, 2.0 / 3.0)});
}

Vec xi1(double v) {
  Vec xi(1);
  xi[0] = v;
  return xi;
}

// Independent oracle: iterating the one-step recursion of the Cantor measure
// by hand gives mu-hat(xi) = exp(-i xi/2) prod_k cos(3^{-k} xi).
Complex cantor_product(double xi, double tol) {
  int k_max = 1;
  if (std::abs(xi) > tol) {
    k_max = static_cast<int>(
        std::ceil(std::log(std::abs(xi) / tol) / std::log(3.0)));
  }
  Complex value = std::polar(1.0, -xi / 2.0);
  for (int k = 1; k <= k_max; ++k) {
    value *= std::cos(std::pow(3.0, -k) * xi);
  }
  return value;
}

// Test-local generic recursion, independent of the product fast path.
Complex recursive_oracle(const measures::IFSMeasure& mu, const Vec& xi,
                         double tol) {
  const double sup_abs = mu.bounding_box().max_abs_corner();
  if (xi.norm() * sup_abs <= tol) return Complex{1.0, 0.0};
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < mu.map_count(); ++j) {
    const auto& s = mu.maps()[j];
    acc += mu.weights()[j] * std::polar(1.0, -s.translation.dot(xi)) *
           recursive_oracle(mu, s.ratio * (s.rotation.transpose() * xi), tol);
  }
  return acc;
}

}  // namespace

TEST_CASE("atomic transform basics") {
  const measures::AtomicMeasure mu(1, {0.25, -1.5},
                                   {Complex{0.5, 0.0}, Complex{0.25, 0.25}});
  CHECK(ft_atomic(mu, xi1(0.0)) == mu.total_mass());

  const measures::AtomicMeasure unit(1, {0.7}, {Complex{1.0, 0.0}});
  for (double x : {0.0, 1.0, 17.3, -250.0}) {
    CHECK(std::abs(ft_atomic(unit, xi1(x))) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("two symmetric unit atoms give a cosine") {
  const measures::AtomicMeasure mu(1, {0.5, -0.5},
                                   {Complex{1.0, 0.0}, Complex{1.0, 0.0}});
  for (double x : {0.1, 1.0, 3.7, 42.0}) {
    const Complex value = ft_atomic(mu, xi1(x));
    CHECK(value.real() == doctest::Approx(2.0 * std::cos(x / 2.0)).epsilon(1e-13));
    CHECK(std::abs(value.imag()) < 1e-13);
  }
}

TEST_CASE("conjugate symmetry for real measures") {
  std::mt19937_64 rng(3);
  std::vector<double> locs(16);
  std::vector<Complex> wts(16);
  for (std::size_t i = 0; i < 16; ++i) {
    locs[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    wts[i] = Complex{static_cast<double>(rng() >> 11) * 0x1.0p-53, 0.0};
  }
  const measures::AtomicMeasure mu(1, std::move(locs), std::move(wts));
  for (double x : {0.3, 2.0, 11.0, 123.0}) {
    const Complex a = ft_atomic(mu, xi1(x));
    const Complex b = ft_atomic(mu, xi1(-x));
    CHECK(b == std::conj(a));
  }
}

TEST_CASE("positive measures peak at the origin") {
  const auto atoms = measures::cylinder_approx(cantor_measure(), 6);
  const double peak = std::abs(ft_atomic(atoms, xi1(0.0)));
  for (double x = 0.5; x < 300.0; x *= 1.9) {
    CHECK(std::abs(ft_atomic(atoms, xi1(x))) <= peak + 1e-14);
  }
}

TEST_CASE("self-similar transform at zero is one") {
  const TransformRequest req;
  CHECK(ft_self_similar(cantor_measure(), xi1(0.0), req) == Complex{1.0, 0.0});
}

TEST_CASE("cantor transform matches the hand-derived product") {
  const auto mu = cantor_measure();
  const TransformRequest req{1e-12, 128};
  for (int i = 0; i < 60; ++i) {
    const double x = std::pow(10.0, 5.0 * i / 59.0);  // 1 .. 1e5
    const Complex ours = ft_self_similar(mu, xi1(x), req);
    const Complex oracle = cantor_product(x, 1e-14);
    CHECK(std::abs(ours - oracle) <= 1e-10);
  }
}

TEST_CASE("cantor non-decay landmark |mu-hat(3^m pi)| = |mu-hat(pi)|") {
  const auto mu = cantor_measure();
  const TransformRequest req{1e-11, 128};
  const double base = std::abs(ft_self_similar(mu, xi1(std::numbers::pi), req));
  CHECK(base > 0.1);  // the landmark value is far from zero
  for (int m = 1; m <= 8; ++m) {
    const double x = std::pow(3.0, m) * std::numbers::pi;
    CHECK(std::abs(std::abs(ft_self_similar(mu, xi1(x), req)) - base) <= 1e-9);
  }
}

TEST_CASE("self-similar transform agrees with its cylinder discretization") {
  const auto mu = cantor_measure();
  const TransformRequest req{1e-10, 128};
  const double diam = mu.bounding_box().diameter();
  for (int depth : {4, 6, 8}) {
    const auto atoms = measures::cylinder_approx(mu, depth);
    for (double x : {0.5, 3.0, 20.0, 111.0}) {
      const Complex exact = ft_self_similar(mu, xi1(x), req);
      const Complex approx = ft_atomic(atoms, xi1(x));
      const double bound = req.tol + diam * std::pow(1.0 / 3.0, depth) * x;
      CHECK(std::abs(exact - approx) <= bound);
    }
  }
}

TEST_CASE("product fast path agrees with a generic recursion") {
  const auto mu = cantor_measure();
  const TransformRequest req{1e-9, 128};
  for (double x : {0.7, 5.0, 39.0, 260.0}) {
    const Complex fast = ft_self_similar(mu, xi1(x), req);
    const Complex slow = recursive_oracle(mu, xi1(x), req.tol);
    CHECK(std::abs(fast - slow) <= 1e-12);
  }
}

TEST_CASE("unequal-ratio transform falls back to the tree recursion") {
  const measures::IFSMeasure mu({line_map(0.25, 0.0), line_map(0.5, 0.5)});
  CHECK_FALSE(mu.uniform_similarity());
  const TransformRequest req{1e-8, 64};
  const auto atoms = measures::cylinder_approx(mu, 12);
  for (double x : {0.4, 2.0, 9.0}) {
    const Complex tree = ft_self_similar(mu, xi1(x), req);
    const Complex direct = ft_atomic(atoms, xi1(x));
    CHECK(std::abs(tree - direct) <=
          req.tol + std::pow(0.5, 12) * x + 1e-12);
  }
}

TEST_CASE("depth cap raises instead of looping") {
  const TransformRequest req{1e-12, 4};
  CHECK_THROWS_AS(ft_self_similar(cantor_measure(), xi1(1e6), req),
                  DepthExceededError);
}

TEST_CASE("cylinder spectrum factorizes the cylinder transform") {
  const auto mu = cantor_measure();
  for (int depth : {3, 7}) {
    const CylinderSpectrum spectrum(mu, depth);
    const auto atoms = measures::cylinder_approx(mu, depth);
    for (double x : {0.3, 4.0, 77.0, 1500.0}) {
      CHECK(std::abs(spectrum.ft(xi1(x)) - ft_atomic(atoms, xi1(x))) <= 1e-11);
    }
  }
}

TEST_CASE("mollified L2 norm of a single atom") {
  const measures::AtomicMeasure delta(1, {0.35}, {Complex{1.0, 0.0}});
  const Mollifier chi(1);
  for (double eps : {1.0, 0.5}) {
    const double value = mollified_l2(delta, eps);
    const double expected = chi.l2_norm_sq() / eps;
    CHECK(std::abs(value - expected) / expected < 0.01);
  }
}

TEST_CASE("mollified L2 scaling law") {
  const measures::AtomicMeasure delta(1, {0.0}, {Complex{1.0, 0.0}});
  const double v1 = mollified_l2(delta, 0.8);
  const double v2 = mollified_l2(delta, 0.4);
  CHECK(v2 / v1 == doctest::Approx(2.0).epsilon(5e-3));
}

TEST_CASE("far-separated atoms decouple") {
  const measures::AtomicMeasure pair(1, {0.0, 40.0},
                                     {Complex{1.0, 0.0}, Complex{1.0, 0.0}});
  const Mollifier chi(1);
  const double eps = 0.25;
  const double value = mollified_l2(pair, eps);
  const double expected = 2.0 * chi.l2_norm_sq() / eps;
  CHECK(std::abs(value - expected) / expected < 0.01);
}

TEST_CASE("mollified L2 norm of a planar atom") {
  const measures::AtomicMeasure delta(2, {0.1, -0.2}, {Complex{1.0, 0.0}});
  const Mollifier chi(2);
  const double eps = 0.5;
  const double value = mollified_l2(delta, eps);
  const double expected = chi.l2_norm_sq() / (eps * eps);
  CHECK(std::abs(value - expected) / expected < 0.01);
}

TEST_CASE("mollified L2 respects the sample cap") {
  const measures::AtomicMeasure delta(1, {0.0}, {Complex{1.0, 0.0}});
  CHECK_THROWS_AS(mollified_l2(delta, 0.01, 1e-8, 128), BudgetError);
}

TEST_CASE("mollifier basics") {
  const Mollifier chi(1);
  CHECK(chi.hat(0.0) == doctest::Approx(1.0).epsilon(1e-10));  // unit integral
  CHECK(chi.hat(3.0) < 1.0);
  const double r = chi.cutoff_radius(1e-6);
  CHECK(r > 1.0);
  CHECK(std::abs(chi.hat(r + 5.0)) < 1e-5);

  const Mollifier chi2(2);
  CHECK(chi2.hat(0.0) == doctest::Approx(1.0).epsilon(1e-10));
}
