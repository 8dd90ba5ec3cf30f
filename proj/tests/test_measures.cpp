#include "fraclab/measures.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fraclab;
using namespace fraclab::measures;

namespace {

Similitude line_map(double ratio, double translate, double flip = 1.0) {
  Similitude s;
  s.ratio = ratio;
  s.rotation = Mat(1, 1);
  s.rotation(0, 0) = flip;
  s.translation = Vec(1);
  s.translation[0] = translate;
  return s;
}

IFSMeasure cantor_measure() {
  return IFSMeasure({line_map(1.0 / 3.0, 0.0), line_map(1.0 / 3.0, 2.0 / 3.0)});
}

}  // namespace

TEST_CASE("similarity dimension on exact Moran solutions") {
  CHECK(similarity_dimension({line_map(0.5, 0.0), line_map(0.5, 0.5)}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(similarity_dimension({line_map(0.5, 0.0), line_map(0.5, 0.2),
                              line_map(0.5, 0.4), line_map(0.5, 0.6)}) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("similarity dimension matches the closed form for equal ratios") {
  // N maps of ratio eta solve N eta^alpha = 1, i.e. alpha = log N / log(1/eta)
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const int n_maps = 2 + static_cast<int>(rng() % 7);
    const double eta = 0.05 + 0.9 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::vector<Similitude> maps;
    for (int j = 0; j < n_maps; ++j) {
      maps.push_back(line_map(eta, static_cast<double>(j)));
    }
    const double expected = std::log(n_maps) / std::log(1.0 / eta);
    const double alpha = similarity_dimension(maps);
    CHECK(std::abs(alpha - expected) <= 1e-10);
    CHECK(moran_residual(maps, alpha) <= 1e-10);
  }
}

TEST_CASE("similarity dimension rejects bad input") {
  CHECK_THROWS_AS(similarity_dimension({line_map(0.5, 0.0)}),
                  std::invalid_argument);
  auto bad = line_map(0.5, 0.0);
  bad.ratio = 1.0;
  CHECK_THROWS_AS(similarity_dimension({bad, line_map(0.5, 0.0)}),
                  std::invalid_argument);
}

TEST_CASE("similarity dimension ignores translations") {
  std::vector<Similitude> maps{line_map(0.3, 0.1), line_map(0.6, 0.9)};
  std::vector<Similitude> scaled{line_map(0.3, 17.0), line_map(0.6, -153.0)};
  CHECK(similarity_dimension(maps) == similarity_dimension(scaled));
}

TEST_CASE("similitude validation") {
  auto s = line_map(0.5, 0.0);
  CHECK_NOTHROW(s.validate());
  s.ratio = 1.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  Similitude skew;
  skew.ratio = 0.5;
  skew.rotation = Mat(2, 2);
  skew.rotation << 1.0, 0.5, 0.0, 1.0;
  skew.translation = Vec::Zero(2);
  CHECK_THROWS_AS(skew.validate(), std::invalid_argument);
}

TEST_CASE("similitude fixed point") {
  const auto s = line_map(1.0 / 3.0, 2.0 / 3.0);
  CHECK(s.fixed_point()[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ifs invariants") {
  CHECK_THROWS_AS(IFSMeasure({line_map(0.5, 0.0), line_map(0.5, 0.5)},
                             {0.6, 0.6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(IFSMeasure({line_map(0.5, 0.0), line_map(0.5, 0.5)},
                             {1.0, -0.1}),
                  std::invalid_argument);

  // a box the maps leave is rejected
  Box bad{Vec(1), Vec(1)};
  bad.lo[0] = 0.5;
  bad.hi[0] = 0.6;
  CHECK_THROWS_AS(IFSMeasure({line_map(1.0 / 3.0, 0.0),
                              line_map(1.0 / 3.0, 2.0 / 3.0)},
                             {}, bad),
                  std::invalid_argument);
}

TEST_CASE("derived invariant box for the Cantor maps is [0,1]") {
  const auto mu = cantor_measure();
  CHECK(mu.bounding_box().lo[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(mu.bounding_box().hi[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mu.uniform_similarity());
  CHECK(mu.dimension_alpha() ==
        doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-11));
}

TEST_CASE("cylinder approximation at depth 0 is one unit atom") {
  const auto atoms = cylinder_approx(cantor_measure(), 0);
  REQUIRE(atoms.size() == 1);
  CHECK(atoms.weight(0) == Complex{1.0, 0.0});
  CHECK(atoms.total_mass() == Complex{1.0, 0.0});
}

TEST_CASE("cantor cylinders at depth 2") {
  const auto atoms = cylinder_approx(cantor_measure(), 2);
  REQUIRE(atoms.size() == 4);
  const double expected[] = {0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(atoms.location(i)[0] == doctest::Approx(expected[i]).epsilon(1e-15));
    CHECK(atoms.weight(i).real() == doctest::Approx(0.25).epsilon(1e-15));
  }
}

TEST_CASE("cylinder weights sum to one") {
  // equal weights: products are dyadic, the sum is exactly 1
  CHECK(cylinder_approx(cantor_measure(), 10).total_mass() ==
        Complex{1.0, 0.0});

  const IFSMeasure uneven({line_map(0.25, 0.0), line_map(0.55, 0.45)},
                          {0.3, 0.7});
  const auto atoms = cylinder_approx(uneven, 7);
  CHECK(std::abs(atoms.total_mass() - Complex{1.0, 0.0}) <= 1e-12);
}

TEST_CASE("pushing level d through map j reproduces a block of level d+1") {
  const IFSMeasure mu({line_map(0.4, 0.0), line_map(0.3, 0.7)}, {0.35, 0.65});
  const int depth = 5;
  const auto level = cylinder_approx(mu, depth);
  const auto next = cylinder_approx(mu, depth + 1);
  for (std::size_t j = 0; j < mu.map_count(); ++j) {
    const auto& s = mu.maps()[j];
    const double pj = mu.weights()[j];
    for (std::size_t i = 0; i < level.size(); ++i) {
      Vec x(1);
      x[0] = level.location(i)[0];
      const std::size_t idx = j * level.size() + i;
      // bitwise: the child atom is literally S_j applied to the parent atom
      CHECK(next.location(idx)[0] == s.apply(x)[0]);
      CHECK(next.weight(idx) == pj * level.weight(i));
    }
  }
}

TEST_CASE("cylinder budget is enforced") {
  CHECK_THROWS_AS(cylinder_approx(cantor_measure(), 10, 512), BudgetError);
  CHECK_NOTHROW(cylinder_approx(cantor_measure(), 9, 512));
}

TEST_CASE("chaos game is deterministic and stays in the box") {
  const auto mu = cantor_measure();
  const auto a = chaos_game_sample(mu, 1000, 42);
  const auto b = chaos_game_sample(mu, 1000, 42);
  CHECK(a == b);
  const auto c = chaos_game_sample(mu, 1000, 43);
  CHECK(a != c);
  for (double x : a) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("chaos game empirical cylinder mass") {
  // left-third mass equals the weight of map 1
  const std::size_t count = 100000;
  const auto samples = chaos_game_sample(cantor_measure(), count, 2024);
  std::size_t hits = 0;
  for (double x : samples) {
    if (x <= 1.0 / 3.0) ++hits;
  }
  const double fraction = static_cast<double>(hits) / count;
  const double sigma = std::sqrt(0.25 / count);
  CHECK(std::abs(fraction - 0.5) <= 4.0 * sigma);
}

TEST_CASE("atomic measure invariants") {
  CHECK_THROWS_AS(AtomicMeasure(1, {0.0, 1.0}, {Complex{1.0, 0.0}}),
                  std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(AtomicMeasure(1, {nan}, {Complex{1.0, 0.0}}),
                  std::invalid_argument);

  const AtomicMeasure mu(1, {0.0, 1.0}, {Complex{0.25, 0.0}, Complex{0.5, 0.25}});
  CHECK(mu.total_mass() == Complex{0.75, 0.25});
  CHECK_FALSE(mu.has_real_nonnegative_weights());
}

TEST_CASE("weighted measure validates the density") {
  AtomicMeasure base(1, {0.0, 1.0}, {Complex{0.5, 0.0}, Complex{0.5, 0.0}});
  CHECK_THROWS_AS(WeightedMeasure(base, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedMeasure(base, {1.0, -2.0}), std::invalid_argument);
  const WeightedMeasure w(base, {2.0, 3.0});
  CHECK(w.folded().weight(1) == Complex{1.5, 0.0});
}
