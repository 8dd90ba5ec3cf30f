#pragma once

#include "fraclab/asymptotics.hpp"
#include "fraclab/common.hpp"
#include "fraclab/hardy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fraclab::config {

/// Parse failure with a file:line anchor in the message.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class MeasureKind { kIfs, kAtomic };
enum class DensityKind { kConst, kList, kExpr };
enum class PointSource { kCylinders, kChaos };

struct MapSpec {
  double ratio = 0.0;
  double angle = 0.0;  // radians; n = 1 admits 0 (identity) and pi (flip)
  std::vector<double> translate;
};

struct AtomSpec {
  std::vector<double> location;
  Complex weight{1.0, 0.0};
};

struct ExperimentConfig {
  int dim = 1;
  MeasureKind measure_kind = MeasureKind::kIfs;

  // ifs
  std::vector<MapSpec> maps;
  std::vector<double> weights;  // empty selects equal weights
  bool osc_asserted = false;
  std::optional<Box> box;
  int depth = 10;

  // atomic
  std::vector<AtomSpec> atoms;

  // density f (per atom) on top of the measure
  DensityKind density_kind = DensityKind::kConst;
  double density_const = 1.0;
  std::vector<double> density_list;
  std::string density_expr;

  std::optional<hardy::Inequality> theorem;
  double p = 2.0;
  std::optional<double> alpha;  // defaults to the IFS similarity dimension

  double L_base = 2.0;
  int L_start = 4;
  int L_count = 11;

  double eps_start = 0.25;
  double eps_ratio = 0.5;
  int eps_count = 10;

  asymptotics::QuadratureSettings quad;
  double ft_tol = 1e-10;
  int ft_max_depth = 64;

  double xi_min = 1.0;
  double xi_max = 1e5;
  int xi_count = 200;

  PointSource point_source = PointSource::kCylinders;
  std::size_t chaos_samples = 4096;

  double band_factor = 8.0;
  double ceiling = 1e12;
  std::size_t budget = std::size_t{1} << 24;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = "out";

  std::vector<double> L_grid() const;
  std::vector<double> eps_grid() const;
};

ExperimentConfig parse_string(const std::string& text,
                              const std::string& source_name = "<config>");
ExperimentConfig parse_file(const std::string& path);

/// Round-trips the resolved configuration as schema text (used by meta.txt).
std::string render(const ExperimentConfig& cfg);

std::optional<hardy::Inequality> inequality_from_name(const std::string& name);

}  // namespace fraclab::config
