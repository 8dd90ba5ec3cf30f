#include "fraclab/experiment.hpp"

#include "fraclab/expr.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/version.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace fraclab::experiment {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

measures::Similitude to_similitude(const config::MapSpec& spec, int dim) {
  measures::Similitude s;
  s.ratio = spec.ratio;
  s.translation = Vec(dim);
  for (int j = 0; j < dim; ++j) {
    s.translation[j] = spec.translate[static_cast<std::size_t>(j)];
  }
  if (dim == 1) {
    s.rotation = Mat(1, 1);
    const double c = std::cos(spec.angle);
    // only +/-1 are orthogonal on the line
    s.rotation(0, 0) = c >= 0.0 ? 1.0 : -1.0;
    if (std::abs(std::abs(c) - 1.0) > 1e-9) {
      throw std::invalid_argument("map angle must be 0 or pi when dim = 1");
    }
  } else {
    s.rotation = Mat(2, 2);
    s.rotation << std::cos(spec.angle), -std::sin(spec.angle),
        std::sin(spec.angle), std::cos(spec.angle);
  }
  return s;
}

std::vector<double> densities_for(const config::ExperimentConfig& cfg,
                                  const measures::AtomicMeasure& atoms) {
  std::vector<double> density(atoms.size(), cfg.density_const);
  switch (cfg.density_kind) {
    case config::DensityKind::kConst:
      break;
    case config::DensityKind::kList:
      if (cfg.density_list.size() != atoms.size()) {
        throw std::invalid_argument(
            "density list length does not match the discretized atom count");
      }
      density = cfg.density_list;
      break;
    case config::DensityKind::kExpr: {
      const auto expression = expr::parse(cfg.density_expr);
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        density[i] = expression->eval(atoms.location(i));
      }
      break;
    }
  }
  return density;
}

struct CsvWriter {
  std::ofstream out;

  CsvWriter(const fs::path& path, const std::string& header_comment) {
    out.open(path);
    if (!out) {
      throw std::runtime_error("cannot open output file " + path.string());
    }
    out << "# fraclab " << version::kString << " | " << header_comment << "\n";
  }
};

std::string measure_summary(const config::ExperimentConfig& cfg,
                            const BuiltMeasure& built) {
  std::ostringstream os;
  if (built.ifs) {
    os << "measure=ifs maps=" << built.ifs->map_count()
       << " depth=" << cfg.depth << " osc="
       << (built.ifs->osc_asserted() ? "true" : "false");
  } else {
    os << "measure=atomic atoms=" << built.weighted->base.size();
  }
  os << " n=" << cfg.dim << " alpha=" << fmt(built.alpha);
  if (cfg.theorem) os << " theorem=" << hardy::inequality_name(*cfg.theorem);
  os << " p=" << fmt(cfg.p) << " seed=" << cfg.seed;
  return os.str();
}

void write_series_csv(const fs::path& path, const std::string& header,
                      const asymptotics::AsymptoticSeries& s) {
  CsvWriter csv(path, header);
  csv.out << "L,value,running_min_tail,running_max_tail\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const std::size_t start = (i + 1) / 2;
    double lo = s.values[start], hi = s.values[start];
    for (std::size_t j = start; j <= i; ++j) {
      lo = std::min(lo, s.values[j]);
      hi = std::max(hi, s.values[j]);
    }
    csv.out << fmt(s.L_values[i]) << "," << fmt(s.values[i]) << "," << fmt(lo)
            << "," << fmt(hi) << "\n";
  }
}

void write_meta(const config::ExperimentConfig& cfg, const std::string& command,
                const BuiltMeasure& built) {
  CsvWriter meta(fs::path(cfg.out_dir) / "meta.txt",
                 "command=" + command + " | " + measure_summary(cfg, built));
  meta.out << "# resolved configuration\n" << config::render(cfg);
}

std::shared_ptr<const fourier::SpectrumEvaluator> spectrum_for(
    const config::ExperimentConfig& cfg, const BuiltMeasure& built) {
  if (built.ifs && built.ifs->uniform_similarity() &&
      cfg.density_kind == config::DensityKind::kConst) {
    return std::make_shared<fourier::CylinderSpectrum>(*built.ifs, cfg.depth,
                                                       cfg.density_const);
  }
  return std::make_shared<fourier::AtomicSpectrum>(*built.weighted);
}

int run_dimension(const config::ExperimentConfig& cfg,
                  const BuiltMeasure& built) {
  if (!built.ifs) {
    throw std::invalid_argument("dimension: requires an ifs measure");
  }
  const double alpha = built.ifs->dimension_alpha();
  const double residual =
      measures::moran_residual(built.ifs->maps(), alpha);
  CsvWriter csv(fs::path(cfg.out_dir) / "dimension.csv",
                "command=dimension | " + measure_summary(cfg, built));
  csv.out << "alpha,moran_residual\n" << fmt(alpha) << "," << fmt(residual)
          << "\n";
  std::cout << "similarity dimension alpha = " << fmt(alpha)
            << " (moran residual " << fmt(residual) << ")\n";
  return kExitOk;
}

int run_geometry(const config::ExperimentConfig& cfg,
                 const BuiltMeasure& built) {
  geometry::PointCloud cloud;
  if (built.ifs && cfg.point_source == config::PointSource::kChaos) {
    cloud = geometry::PointCloud(
        cfg.dim, measures::chaos_game_sample(*built.ifs, cfg.chaos_samples,
                                             cfg.seed));
  } else {
    cloud = geometry::PointCloud::from_atoms(built.weighted->base);
  }

  const auto eps_grid = cfg.eps_grid();
  const auto content =
      geometry::minkowski_content(cloud, built.alpha, eps_grid);

  CsvWriter csv(fs::path(cfg.out_dir) / "geometry.csv",
                "command=geometry | " + measure_summary(cfg, built) +
                    " points=" + std::to_string(cloud.size()));
  csv.out << "epsilon,neighborhood_volume,content_value,covering_number,"
             "packing_number\n";
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const double eps = eps_grid[i];
    const double vol = geometry::neighborhood_volume(cloud, eps, eps * 0.25);
    const int cover = geometry::covering_number(cloud, eps);
    const int pack = geometry::packing_number(cloud, eps);
    csv.out << fmt(eps) << "," << fmt(vol) << "," << fmt(content.values[i])
            << "," << cover << "," << pack << "\n";
  }
  csv.out << "# content band over last quartile: lower=" << fmt(content.lower_est)
          << " upper=" << fmt(content.upper_est) << "\n";
  std::cout << "minkowski content band [" << fmt(content.lower_est) << ", "
            << fmt(content.upper_est) << "] over " << eps_grid.size()
            << " scales\n";
  return kExitOk;
}

int run_fourier(const config::ExperimentConfig& cfg,
                const BuiltMeasure& built) {
  const fourier::TransformRequest req{cfg.ft_tol, cfg.ft_max_depth};
  CsvWriter csv(fs::path(cfg.out_dir) / "fourier.csv",
                "command=fourier | " + measure_summary(cfg, built));
  csv.out << "xi,re,im,abs\n";
  const double log_lo = std::log(cfg.xi_min), log_hi = std::log(cfg.xi_max);
  for (int i = 0; i < cfg.xi_count; ++i) {
    const double t = cfg.xi_count == 1
                         ? 0.0
                         : static_cast<double>(i) / (cfg.xi_count - 1);
    const double r = std::exp(log_lo + t * (log_hi - log_lo));
    Vec xi = Vec::Zero(cfg.dim);
    xi[0] = r;  // radial sweep along the first axis
    const Complex value = built.ifs
                              ? fourier::ft_self_similar(*built.ifs, xi, req)
                              : fourier::ft_atomic(built.weighted->folded(), xi);
    csv.out << fmt(r) << "," << fmt(value.real()) << "," << fmt(value.imag())
            << "," << fmt(std::abs(value)) << "\n";
  }
  return kExitOk;
}

int run_asymptotics(const config::ExperimentConfig& cfg,
                    const BuiltMeasure& built) {
  const auto spectrum = spectrum_for(cfg, built);
  const auto L_grid = cfg.L_grid();
  const double k = cfg.theorem
                       ? build_setup(cfg, built).rhs_exponent()
                       : cfg.dim - built.alpha;
  const auto ball =
      asymptotics::ball_series(*spectrum, L_grid, cfg.p, k, cfg.quad);
  const auto gauss =
      asymptotics::gaussian_series(*spectrum, L_grid, cfg.p, k, cfg.quad);
  const std::string header = "command=asymptotics | " +
                             measure_summary(cfg, built) + " k=" + fmt(k);
  write_series_csv(fs::path(cfg.out_dir) / "series.csv", header + " kind=ball",
                   ball);
  write_series_csv(fs::path(cfg.out_dir) / "series_gaussian.csv",
                   header + " kind=gaussian", gauss);
  std::cout << "ball series band [" << fmt(ball.liminf_est) << ", "
            << fmt(ball.limsup_est) << "], gaussian band ["
            << fmt(gauss.liminf_est) << ", " << fmt(gauss.limsup_est) << "]\n";
  return kExitOk;
}

int run_hardy(const config::ExperimentConfig& cfg, const BuiltMeasure& built) {
  const auto& weighted = *built.weighted;
  CsvWriter csv(fs::path(cfg.out_dir) / "hardy.csv",
                "command=hardy | " + measure_summary(cfg, built));
  csv.out << "quantity,p,value\n";

  std::vector<Complex> coeffs(weighted.base.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] = weighted.effective_weight(i);
  }
  const double hp = std::min(cfg.p, 2.0);
  csv.out << "hardy_sum," << fmt(hp) << ","
          << fmt(hardy::hardy_sum(coeffs, hp)) << "\n";

  if (weighted.base.has_real_nonnegative_weights()) {
    hardy::HardySetup setup{
        .measure = weighted,
        .p = hp,
        .theorem = hardy::Inequality::kFractalHardy,
        .L_grid = cfg.L_grid(),
        .alpha = built.alpha,
    };
    csv.out << "fractal_hardy_lhs," << fmt(hp) << ","
            << fmt(hardy::fractal_hardy_lhs(setup)) << "\n";
  }
  if (cfg.dim == 1) {
    std::size_t merged = 0;
    hardy::merge_coincident_frequencies(weighted.folded(), 1e-12, &merged);
    if (merged > 0) {
      std::cerr << "fraclab: warning: " << merged
                << " coinciding frequencies merged before the almost-periodic "
                   "quadrature\n";
    }
    const auto bes = hardy::besicovitch_norm(weighted.folded(), cfg.p,
                                             cfg.L_grid());
    write_series_csv(fs::path(cfg.out_dir) / "series_besicovitch.csv",
                     "command=hardy | " + measure_summary(cfg, built) +
                         " kind=besicovitch",
                     bes);
    csv.out << "besicovitch_tail_min," << fmt(cfg.p) << ","
            << fmt(bes.liminf_est) << "\n";
  }
  return kExitOk;
}

int run_verify(const config::ExperimentConfig& cfg, const BuiltMeasure& built) {
  if (!cfg.theorem) {
    throw std::invalid_argument("verify: config selects no theorem");
  }
  const auto setup = build_setup(cfg, built);
  const auto report = hardy::verify_inequality(setup);

  const std::string header =
      "command=verify | " + measure_summary(cfg, built) +
      " k=" + fmt(setup.rhs_exponent());
  write_series_csv(fs::path(cfg.out_dir) / "series.csv",
                   header + " kind=rhs", report.rhs_series);

  {
    CsvWriter csv(fs::path(cfg.out_dir) / "verdict.csv", header);
    csv.out << "theorem,n,p,alpha,k,lhs,rhs_liminf_est,rhs_limsup_est,"
               "band_ratio,empirical_C,stable\n";
    csv.out << report.theorem_name << "," << cfg.dim << "," << fmt(setup.p)
            << "," << fmt(setup.alpha) << "," << fmt(setup.rhs_exponent())
            << "," << fmt(report.lhs) << "," << fmt(report.rhs_series.liminf_est)
            << "," << fmt(report.rhs_series.limsup_est) << ","
            << fmt(report.rhs_series.band_ratio()) << ","
            << fmt(report.empirical_C) << ","
            << (report.stable ? "true" : "false") << "\n";
  }
  {
    CsvWriter txt(fs::path(cfg.out_dir) / "verdict.txt", header);
    txt.out << "inequality:    " << report.theorem_name << "\n"
            << "lhs:           " << fmt(report.lhs) << "\n"
            << "rhs tail band: [" << fmt(report.rhs_series.liminf_est) << ", "
            << fmt(report.rhs_series.limsup_est) << "] (ratio "
            << fmt(report.rhs_series.band_ratio()) << ", rule <= "
            << fmt(setup.band_factor) << ")\n"
            << "empirical C:   " << fmt(report.empirical_C) << "\n"
            << "stable:        " << (report.stable ? "true" : "false") << "\n"
            << "notes:         " << report.notes << "\n";
  }

  const bool pass = report.stable && std::isfinite(report.empirical_C) &&
                    report.empirical_C < cfg.ceiling;
  std::cout << report.theorem_name << ": lhs=" << fmt(report.lhs)
            << " empirical_C=" << fmt(report.empirical_C)
            << " stable=" << (report.stable ? "true" : "false")
            << (pass ? " [ok]" : " [unstable]") << "\n";
  return pass ? kExitOk : kExitUnstable;
}

}  // namespace

namespace {

// Range checks against the selected theorem run before any discretization
// work; a depth-24 cylinder build should never precede a p-range rejection.
void precheck_theorem_ranges(const config::ExperimentConfig& cfg) {
  if (!cfg.theorem) return;
  double alpha = 0.5;
  if (cfg.alpha) {
    alpha = *cfg.alpha;
  } else if (cfg.measure_kind == config::MeasureKind::kIfs) {
    std::vector<measures::Similitude> maps;
    maps.reserve(cfg.maps.size());
    for (const auto& m : cfg.maps) maps.push_back(to_similitude(m, cfg.dim));
    alpha = measures::similarity_dimension(maps);
  }
  hardy::HardySetup probe{
      .measure = measures::WeightedMeasure(
          measures::AtomicMeasure(cfg.dim,
                                  std::vector<double>(
                                      static_cast<std::size_t>(cfg.dim), 0.0),
                                  {Complex{1.0, 0.0}}),
          {1.0}),
      .p = cfg.p,
      .theorem = *cfg.theorem,
      .L_grid = cfg.L_grid(),
      .alpha = alpha,
      .band_factor = cfg.band_factor,
  };
  probe.validate();
}

}  // namespace

BuiltMeasure build_measure(const config::ExperimentConfig& cfg) {
  BuiltMeasure built;
  if (cfg.measure_kind == config::MeasureKind::kIfs) {
    std::vector<measures::Similitude> maps;
    maps.reserve(cfg.maps.size());
    for (const auto& m : cfg.maps) maps.push_back(to_similitude(m, cfg.dim));
    built.ifs.emplace(std::move(maps), cfg.weights, cfg.box, cfg.osc_asserted);
    auto atoms = measures::cylinder_approx(*built.ifs, cfg.depth, cfg.budget);
    auto density = densities_for(cfg, atoms);
    built.weighted = std::make_shared<measures::WeightedMeasure>(
        std::move(atoms), std::move(density));
    built.alpha = cfg.alpha.value_or(built.ifs->dimension_alpha());
  } else {
    std::vector<double> flat;
    std::vector<Complex> weights;
    for (const auto& a : cfg.atoms) {
      flat.insert(flat.end(), a.location.begin(), a.location.end());
      weights.push_back(a.weight);
    }
    measures::AtomicMeasure atoms(cfg.dim, std::move(flat), std::move(weights));
    auto density = densities_for(cfg, atoms);
    built.weighted = std::make_shared<measures::WeightedMeasure>(
        std::move(atoms), std::move(density));
    built.alpha = cfg.alpha.value_or(0.5);
  }
  return built;
}

hardy::HardySetup build_setup(const config::ExperimentConfig& cfg,
                              const BuiltMeasure& built) {
  if (!cfg.theorem) {
    throw std::invalid_argument("no theorem selected in the configuration");
  }
  hardy::HardySetup setup{
      .measure = *built.weighted,
      .p = cfg.p,
      .theorem = *cfg.theorem,
      .L_grid = cfg.L_grid(),
      .alpha = built.alpha,
      .quad = cfg.quad,
      .band_factor = cfg.band_factor,
  };
  if (setup.theorem != hardy::Inequality::kDiscreteHardy) {
    setup.spectrum = spectrum_for(cfg, built);
  }
  return setup;
}

int run(const config::ExperimentConfig& cfg, const std::string& command) {
  try {
    set_thread_count(cfg.threads);
    fs::create_directories(cfg.out_dir);

    precheck_theorem_ranges(cfg);
    const BuiltMeasure built = build_measure(cfg);
    write_meta(cfg, command, built);

    if (command == "dimension") return run_dimension(cfg, built);
    if (command == "geometry") return run_geometry(cfg, built);
    if (command == "fourier") return run_fourier(cfg, built);
    if (command == "asymptotics") return run_asymptotics(cfg, built);
    if (command == "hardy") return run_hardy(cfg, built);
    if (command == "verify") return run_verify(cfg, built);
    if (command == "all") {
      if (built.ifs) run_dimension(cfg, built);
      run_geometry(cfg, built);
      run_fourier(cfg, built);
      run_asymptotics(cfg, built);
      run_hardy(cfg, built);
      return cfg.theorem ? run_verify(cfg, built) : kExitOk;
    }
    throw std::invalid_argument("unknown command '" + command + "'");
  } catch (const BudgetError& e) {
    std::cerr << "fraclab: " << e.what() << "\n";
    return kExitBudget;
  } catch (const DepthExceededError& e) {
    std::cerr << "fraclab: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "fraclab: " << e.what() << "\n";
    return kExitConfigInvalid;
  }
}

}  // namespace fraclab::experiment
