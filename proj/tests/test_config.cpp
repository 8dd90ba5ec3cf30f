#include "fraclab/config.hpp"

#include "fraclab/expr.hpp"
#include "fraclab/experiment.hpp"
#include "fraclab/parallel.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace fraclab;
using namespace fraclab::config;

namespace {

const char* kCantorConfig = R"(
# middle-thirds Cantor measure
dim = 1
measure = ifs
map = ratio=0.3333333333333333 angle=0 translate=0
map = ratio=0.3333333333333333 angle=0 translate=0.6666666666666666
osc = true
box = 0 1
depth = 6
density = const 1
theorem = lp-ball-lower
p = 2
L.start = 3
L.count = 5
seed = 7
)";

std::filesystem::path temp_dir(const char* leaf) {
  auto dir = std::filesystem::temp_directory_path() / "fraclab_tests" / leaf;
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("a full config parses and renders") {
  const auto cfg = parse_string(kCantorConfig);
  CHECK(cfg.dim == 1);
  CHECK(cfg.measure_kind == MeasureKind::kIfs);
  REQUIRE(cfg.maps.size() == 2);
  CHECK(cfg.maps[1].translate[0] == doctest::Approx(2.0 / 3.0));
  CHECK(cfg.osc_asserted);
  REQUIRE(cfg.box.has_value());
  CHECK(cfg.box->hi[0] == 1.0);
  CHECK(cfg.depth == 6);
  CHECK(cfg.theorem == hardy::Inequality::kLpBallLowerBound);
  CHECK(cfg.seed == 7);
  CHECK(cfg.L_grid() == std::vector<double>{8.0, 16.0, 32.0, 64.0, 128.0});

  // the rendered form parses back to the same grid and theorem
  const auto again = parse_string(render(cfg));
  CHECK(again.L_grid() == cfg.L_grid());
  CHECK(again.theorem == cfg.theorem);
  CHECK(again.maps[1].translate[0] == cfg.maps[1].translate[0]);
}

TEST_CASE("parse errors carry the line number") {
  const char* bad = "dim = 1\nmeasure = ifs\nwhat = 3\n";
  CHECK_THROWS_WITH_AS(parse_string(bad, "conf"),
                       doctest::Contains("conf:3"), ParseError);

  const char* bad_number = "dim = 1\np = abc\n";
  CHECK_THROWS_WITH_AS(parse_string(bad_number, "conf"),
                       doctest::Contains("conf:2"), ParseError);

  const char* bad_theorem = "theorem = nope\n";
  CHECK_THROWS_AS(parse_string(bad_theorem), ParseError);

  const char* no_maps = "dim = 1\nmeasure = ifs\n";
  CHECK_THROWS_WITH_AS(parse_string(no_maps, "conf"),
                       doctest::Contains("at least 2 map"), ParseError);
}

TEST_CASE("atomic measures parse with complex weights") {
  const char* text =
      "dim = 1\nmeasure = atomic\n"
      "atom = loc=0 w=1\n"
      "atom = loc=2.5 w=0.5,-0.25\n"
      "alpha = 0.5\n";
  const auto cfg = parse_string(text);
  REQUIRE(cfg.atoms.size() == 2);
  CHECK(cfg.atoms[1].weight == Complex{0.5, -0.25});
}

TEST_CASE("density expressions evaluate over coordinates") {
  const auto e = expr::parse("2*x + 1");
  const double at2[] = {2.0};
  CHECK(e->eval(at2) == 5.0);

  CHECK(expr::parse("sin(pi/2)")->eval(at2) == doctest::Approx(1.0));
  CHECK(expr::parse("x^2 - 0.5")->eval(at2) == doctest::Approx(3.5));
  CHECK(expr::parse("exp(0) + sqrt(4)")->eval(at2) == doctest::Approx(3.0));
  CHECK_THROWS_WITH_AS(expr::parse("2 +"), doctest::Contains("position"),
                       std::invalid_argument);
  CHECK_THROWS_AS(expr::parse("nope(3)"), std::invalid_argument);
}

TEST_CASE("experiment rejects a p outside the theorem range with exit 2") {
  auto cfg = parse_string(kCantorConfig);
  cfg.theorem = hardy::Inequality::kFractalHardy;
  cfg.p = 3.0;  // fractal Hardy wants p in [1,2]
  cfg.out_dir = temp_dir("bad_p").string();
  CHECK(experiment::run(cfg, "verify") == experiment::kExitConfigInvalid);
}

TEST_CASE("experiment maps budget exhaustion to exit 3") {
  auto cfg = parse_string(kCantorConfig);
  cfg.budget = 16;  // depth 6 needs 64 atoms
  cfg.out_dir = temp_dir("budget").string();
  CHECK(experiment::run(cfg, "verify") == experiment::kExitBudget);
}

TEST_CASE("verify writes the expected artifacts and reruns identically") {
  auto cfg = parse_string(kCantorConfig);
  cfg.depth = 5;
  cfg.L_count = 4;
  const auto dir = temp_dir("rerun");
  cfg.out_dir = dir.string();
  REQUIRE(experiment::run(cfg, "verify") == experiment::kExitOk);

  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };
  const std::string first = slurp(dir / "series.csv");
  const std::string verdict = slurp(dir / "verdict.csv");
  CHECK(first.find("L,value,running_min_tail,running_max_tail") !=
        std::string::npos);
  CHECK(first.rfind("# fraclab", 0) == 0);  // comment header first
  CHECK(verdict.find("lp-ball-lower") != std::string::npos);

  cfg.threads = 4;
  REQUIRE(experiment::run(cfg, "verify") == experiment::kExitOk);
  CHECK(slurp(dir / "series.csv") == first);
  set_thread_count(1);
}

TEST_CASE("density expressions flow through the discretization") {
  auto cfg = parse_string(kCantorConfig);
  cfg.depth = 2;
  cfg.density_kind = DensityKind::kExpr;
  cfg.density_expr = "1 + x";
  const auto built = experiment::build_measure(cfg);
  REQUIRE(built.weighted->base.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(built.weighted->density[i] ==
          doctest::Approx(1.0 + built.weighted->base.location(i)[0]));
  }
}

TEST_CASE("a planar ifs runs the verify pipeline") {
  const char* text =
      "dim = 2\n"
      "measure = ifs\n"
      "map = ratio=0.5 angle=0 translate=0,0\n"
      "map = ratio=0.5 angle=0 translate=0.5,0\n"
      "map = ratio=0.5 angle=0 translate=0,0.5\n"
      "osc = true\n"
      "depth = 5\n"
      "density = const 1\n"
      "theorem = lp-ball-lower\n"
      "p = 2\n"
      "L.start = 2\nL.count = 5\n"
      "quad.radial = 64\nquad.angular = 32\n";
  auto cfg = parse_string(text);
  const auto dir = temp_dir("planar");
  cfg.out_dir = dir.string();
  // alpha = log 3 / log 2 for three half-scale maps
  const auto built = experiment::build_measure(cfg);
  CHECK(built.alpha == doctest::Approx(std::log(3.0) / std::log(2.0)).epsilon(1e-10));
  REQUIRE(experiment::run(cfg, "verify") == experiment::kExitOk);
}

TEST_CASE("theorem ranges are rejected before discretization") {
  auto cfg = parse_string(kCantorConfig);
  cfg.theorem = hardy::Inequality::kFractalHardy;
  cfg.p = 3.0;
  cfg.depth = 24;  // would be 16M atoms if discretization ran first
  cfg.out_dir = temp_dir("precheck").string();
  CHECK(experiment::run(cfg, "verify") == experiment::kExitConfigInvalid);
}

TEST_CASE("geometry command runs with chaos-game points") {
  auto cfg = parse_string(kCantorConfig);
  cfg.point_source = PointSource::kChaos;
  cfg.chaos_samples = 600;
  cfg.eps_start = 0.2;
  cfg.eps_count = 4;
  const auto dir = temp_dir("chaos");
  cfg.out_dir = dir.string();
  REQUIRE(experiment::run(cfg, "geometry") == experiment::kExitOk);
  std::ifstream in(dir / "geometry.csv");
  std::string header, columns;
  std::getline(in, header);
  std::getline(in, columns);
  CHECK(columns ==
        "epsilon,neighborhood_volume,content_value,covering_number,"
        "packing_number");
  CHECK(header.find("points=600") != std::string::npos);
}

TEST_CASE("the trivial discrete-hardy config yields C = 0.5 and exit 0") {
  const char* text =
      "dim = 1\nmeasure = atomic\n"
      "atom = loc=0 w=1\n"
      "density = const 1\n"
      "theorem = discrete-hardy\n"
      "p = 1\n"
      "L.start = 2\nL.count = 4\n";
  auto cfg = parse_string(text);
  const auto dir = temp_dir("trivial");
  cfg.out_dir = dir.string();
  REQUIRE(experiment::run(cfg, "verify") == experiment::kExitOk);

  std::ifstream in(dir / "verdict.csv");
  std::string line, last;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') last = line;
  }
  CHECK(last.find(",0.5,true") != std::string::npos);
}
