#include "fraclab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fraclab::config {

namespace {

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r\n");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r\n");
  return s.substr(from, to - from + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

class LineParser {
 public:
  LineParser(const std::string& source, int line)
      : source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_, line_, what);
  }

  double number(const std::string& tok) const {
    if (tok == "pi") return std::numbers::pi;
    if (tok == "-pi") return -std::numbers::pi;
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) fail("malformed number '" + tok + "'");
      return v;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed number '" + tok + "'");
    }
  }

  long long integer(const std::string& tok) const {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      if (used != tok.size()) fail("malformed integer '" + tok + "'");
      return v;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed integer '" + tok + "'");
    }
  }

  bool boolean(const std::string& tok) const {
    if (tok == "true" || tok == "1" || tok == "yes") return true;
    if (tok == "false" || tok == "0" || tok == "no") return false;
    fail("expected a boolean, got '" + tok + "'");
  }

  std::vector<double> numbers(const std::string& value) const {
    std::vector<double> out;
    for (const auto& tok : split_ws(value)) out.push_back(number(tok));
    return out;
  }

  std::vector<double> comma_numbers(const std::string& value) const {
    std::vector<double> out;
    for (const auto& tok : split_on(value, ',')) out.push_back(number(trim(tok)));
    return out;
  }

 private:
  const std::string& source_;
  int line_;
};

MapSpec parse_map(const LineParser& lp, const std::string& value) {
  MapSpec m;
  bool have_ratio = false, have_translate = false;
  for (const auto& tok : split_ws(value)) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) lp.fail("map entries must be key=value");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "ratio") {
      m.ratio = lp.number(val);
      have_ratio = true;
    } else if (key == "angle") {
      m.angle = lp.number(val);
    } else if (key == "translate") {
      m.translate = lp.comma_numbers(val);
      have_translate = true;
    } else {
      lp.fail("unknown map key '" + key + "'");
    }
  }
  if (!have_ratio || !have_translate) lp.fail("map needs ratio= and translate=");
  return m;
}

AtomSpec parse_atom(const LineParser& lp, const std::string& value) {
  AtomSpec a;
  bool have_loc = false;
  for (const auto& tok : split_ws(value)) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) lp.fail("atom entries must be key=value");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "loc") {
      a.location = lp.comma_numbers(val);
      have_loc = true;
    } else if (key == "w") {
      const auto parts = lp.comma_numbers(val);
      if (parts.empty() || parts.size() > 2) lp.fail("atom weight is re[,im]");
      a.weight = Complex{parts[0], parts.size() == 2 ? parts[1] : 0.0};
    } else {
      lp.fail("unknown atom key '" + key + "'");
    }
  }
  if (!have_loc) lp.fail("atom needs loc=");
  return a;
}

}  // namespace

std::optional<hardy::Inequality> inequality_from_name(const std::string& name) {
  using hardy::Inequality;
  if (name == "discrete-hardy") return Inequality::kDiscreteHardy;
  if (name == "fractal-hardy") return Inequality::kFractalHardy;
  if (name == "l2-ball-lower") return Inequality::kL2BallLowerBound;
  if (name == "lp-ball-lower") return Inequality::kLpBallLowerBound;
  if (name == "l2-density") return Inequality::kL2DensityBound;
  return std::nullopt;
}

std::vector<double> ExperimentConfig::L_grid() const {
  return asymptotics::power_grid(L_base, L_start, L_count);
}

std::vector<double> ExperimentConfig::eps_grid() const {
  std::vector<double> grid(static_cast<std::size_t>(eps_count));
  double eps = eps_start;
  for (int i = 0; i < eps_count; ++i) {
    grid[static_cast<std::size_t>(i)] = eps;
    eps *= eps_ratio;
  }
  return grid;
}

ExperimentConfig parse_string(const std::string& text,
                              const std::string& source_name) {
  ExperimentConfig cfg;
  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  bool density_seen = false;

  while (std::getline(stream, raw)) {
    ++line_no;
    const LineParser lp(source_name, line_no);
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) lp.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) lp.fail("empty key");
    if (value.empty()) lp.fail("empty value for '" + key + "'");

    if (key == "dim") {
      cfg.dim = static_cast<int>(lp.integer(value));
      if (cfg.dim < 1 || cfg.dim > 2) lp.fail("dim must be 1 or 2");
    } else if (key == "measure") {
      if (value == "ifs") cfg.measure_kind = MeasureKind::kIfs;
      else if (value == "atomic") cfg.measure_kind = MeasureKind::kAtomic;
      else lp.fail("measure must be 'ifs' or 'atomic'");
    } else if (key == "map") {
      cfg.maps.push_back(parse_map(lp, value));
    } else if (key == "weights") {
      cfg.weights = lp.numbers(value);
    } else if (key == "osc") {
      cfg.osc_asserted = lp.boolean(value);
    } else if (key == "box") {
      const auto v = lp.numbers(value);
      if (v.size() % 2 != 0 || v.empty()) lp.fail("box needs lo hi per coordinate");
      const int n = static_cast<int>(v.size() / 2);
      Box box{Vec(n), Vec(n)};
      for (int j = 0; j < n; ++j) {
        box.lo[j] = v[static_cast<std::size_t>(2 * j)];
        box.hi[j] = v[static_cast<std::size_t>(2 * j + 1)];
      }
      cfg.box = std::move(box);
    } else if (key == "depth") {
      cfg.depth = static_cast<int>(lp.integer(value));
      if (cfg.depth < 0) lp.fail("depth must be >= 0");
    } else if (key == "atom") {
      cfg.atoms.push_back(parse_atom(lp, value));
    } else if (key == "density") {
      density_seen = true;
      const auto tokens = split_ws(value);
      if (tokens.empty()) lp.fail("density needs a kind");
      if (tokens[0] == "const") {
        if (tokens.size() != 2) lp.fail("density const needs one value");
        cfg.density_kind = DensityKind::kConst;
        cfg.density_const = lp.number(tokens[1]);
      } else if (tokens[0] == "list") {
        if (tokens.size() < 2) lp.fail("density list needs values");
        cfg.density_kind = DensityKind::kList;
        cfg.density_list.clear();
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          cfg.density_list.push_back(lp.number(tokens[i]));
        }
      } else if (tokens[0] == "expr") {
        cfg.density_kind = DensityKind::kExpr;
        cfg.density_expr = trim(value.substr(4));
        if (cfg.density_expr.empty()) lp.fail("density expr needs an expression");
      } else {
        lp.fail("density kind must be const | list | expr");
      }
    } else if (key == "theorem") {
      const auto id = inequality_from_name(value);
      if (!id) {
        lp.fail("unknown theorem '" + value +
                "' (expected discrete-hardy | fractal-hardy | l2-ball-lower | "
                "lp-ball-lower | l2-density)");
      }
      cfg.theorem = id;
    } else if (key == "p") {
      cfg.p = lp.number(value);
    } else if (key == "alpha") {
      cfg.alpha = lp.number(value);
    } else if (key == "L.base") {
      cfg.L_base = lp.number(value);
      if (!(cfg.L_base > 1.0)) lp.fail("L.base must be > 1");
    } else if (key == "L.start") {
      cfg.L_start = static_cast<int>(lp.integer(value));
    } else if (key == "L.count") {
      cfg.L_count = static_cast<int>(lp.integer(value));
      if (cfg.L_count < 1) lp.fail("L.count must be >= 1");
    } else if (key == "eps.start") {
      cfg.eps_start = lp.number(value);
      if (!(cfg.eps_start > 0.0)) lp.fail("eps.start must be > 0");
    } else if (key == "eps.ratio") {
      cfg.eps_ratio = lp.number(value);
      if (!(cfg.eps_ratio > 0.0 && cfg.eps_ratio < 1.0)) {
        lp.fail("eps.ratio must lie in (0,1)");
      }
    } else if (key == "eps.count") {
      cfg.eps_count = static_cast<int>(lp.integer(value));
      if (cfg.eps_count < 1) lp.fail("eps.count must be >= 1");
    } else if (key == "quad.radial") {
      cfg.quad.radial_samples = static_cast<int>(lp.integer(value));
      if (cfg.quad.radial_samples < 64) lp.fail("quad.radial must be >= 64");
    } else if (key == "quad.angular") {
      cfg.quad.angular_order = static_cast<int>(lp.integer(value));
      if (cfg.quad.angular_order < 4) lp.fail("quad.angular must be >= 4");
    } else if (key == "quad.per_oscillation") {
      cfg.quad.min_per_oscillation = static_cast<int>(lp.integer(value));
      if (cfg.quad.min_per_oscillation < 2) {
        lp.fail("quad.per_oscillation must be >= 2");
      }
    } else if (key == "quad.cap") {
      cfg.quad.sample_cap = static_cast<std::size_t>(lp.integer(value));
    } else if (key == "quad.tol") {
      cfg.ft_tol = lp.number(value);
      if (!(cfg.ft_tol > 0.0)) lp.fail("quad.tol must be > 0");
    } else if (key == "quad.max_depth") {
      cfg.ft_max_depth = static_cast<int>(lp.integer(value));
      if (cfg.ft_max_depth < 1) lp.fail("quad.max_depth must be >= 1");
    } else if (key == "xi.min") {
      cfg.xi_min = lp.number(value);
      if (!(cfg.xi_min > 0.0)) lp.fail("xi.min must be > 0");
    } else if (key == "xi.max") {
      cfg.xi_max = lp.number(value);
    } else if (key == "xi.count") {
      cfg.xi_count = static_cast<int>(lp.integer(value));
      if (cfg.xi_count < 2) lp.fail("xi.count must be >= 2");
    } else if (key == "points") {
      if (value == "cylinders") cfg.point_source = PointSource::kCylinders;
      else if (value == "chaos") cfg.point_source = PointSource::kChaos;
      else lp.fail("points must be 'cylinders' or 'chaos'");
    } else if (key == "samples") {
      cfg.chaos_samples = static_cast<std::size_t>(lp.integer(value));
      if (cfg.chaos_samples < 1) lp.fail("samples must be >= 1");
    } else if (key == "band.factor") {
      cfg.band_factor = lp.number(value);
      if (!(cfg.band_factor >= 1.0)) lp.fail("band.factor must be >= 1");
    } else if (key == "ceiling") {
      cfg.ceiling = lp.number(value);
      if (!(cfg.ceiling > 0.0)) lp.fail("ceiling must be > 0");
    } else if (key == "budget") {
      cfg.budget = static_cast<std::size_t>(lp.integer(value));
      if (cfg.budget < 1) lp.fail("budget must be >= 1");
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(lp.integer(value));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(lp.integer(value));
    } else if (key == "out") {
      cfg.out_dir = value;
    } else {
      lp.fail("unknown key '" + key + "'");
    }
  }

  // Structural checks that do not need a line anchor keep line 0.
  const LineParser tail(source_name, line_no);
  if (cfg.measure_kind == MeasureKind::kIfs) {
    if (cfg.maps.size() < 2) tail.fail("ifs measure needs at least 2 map lines");
    for (const auto& m : cfg.maps) {
      if (static_cast<int>(m.translate.size()) != cfg.dim) {
        tail.fail("map translate dimension does not match dim");
      }
    }
    if (!cfg.weights.empty() && cfg.weights.size() != cfg.maps.size()) {
      tail.fail("weights count does not match map count");
    }
  } else {
    if (cfg.atoms.empty()) tail.fail("atomic measure needs at least 1 atom line");
    for (const auto& a : cfg.atoms) {
      if (static_cast<int>(a.location.size()) != cfg.dim) {
        tail.fail("atom loc dimension does not match dim");
      }
    }
    if (!cfg.alpha && cfg.theorem &&
        cfg.theorem != hardy::Inequality::kDiscreteHardy) {
      tail.fail("atomic measures need an explicit alpha for this theorem");
    }
  }
  if (density_seen && cfg.density_kind == DensityKind::kList &&
      cfg.measure_kind == MeasureKind::kAtomic &&
      cfg.density_list.size() != cfg.atoms.size()) {
    tail.fail("density list length does not match atom count");
  }
  if (!(cfg.xi_max > cfg.xi_min)) tail.fail("xi.max must exceed xi.min");
  return cfg;
}

ExperimentConfig parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path, 0, "cannot open config file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "dim = " << cfg.dim << "\n";
  out << "measure = "
      << (cfg.measure_kind == MeasureKind::kIfs ? "ifs" : "atomic") << "\n";
  for (const auto& m : cfg.maps) {
    out << "map = ratio=" << fmt(m.ratio) << " angle=" << fmt(m.angle)
        << " translate=";
    for (std::size_t j = 0; j < m.translate.size(); ++j) {
      out << (j ? "," : "") << fmt(m.translate[j]);
    }
    out << "\n";
  }
  if (!cfg.weights.empty()) {
    out << "weights =";
    for (double w : cfg.weights) out << " " << fmt(w);
    out << "\n";
  }
  if (cfg.measure_kind == MeasureKind::kIfs) {
    out << "osc = " << (cfg.osc_asserted ? "true" : "false") << "\n";
    out << "depth = " << cfg.depth << "\n";
  }
  if (cfg.box) {
    out << "box =";
    for (int j = 0; j < cfg.box->dim(); ++j) {
      out << " " << fmt(cfg.box->lo[j]) << " " << fmt(cfg.box->hi[j]);
    }
    out << "\n";
  }
  for (const auto& a : cfg.atoms) {
    out << "atom = loc=";
    for (std::size_t j = 0; j < a.location.size(); ++j) {
      out << (j ? "," : "") << fmt(a.location[j]);
    }
    out << " w=" << fmt(a.weight.real());
    if (a.weight.imag() != 0.0) out << "," << fmt(a.weight.imag());
    out << "\n";
  }
  out << "density = ";
  switch (cfg.density_kind) {
    case DensityKind::kConst:
      out << "const " << fmt(cfg.density_const);
      break;
    case DensityKind::kList:
      out << "list";
      for (double v : cfg.density_list) out << " " << fmt(v);
      break;
    case DensityKind::kExpr:
      out << "expr " << cfg.density_expr;
      break;
  }
  out << "\n";
  if (cfg.theorem) {
    out << "theorem = " << hardy::inequality_name(*cfg.theorem) << "\n";
  }
  out << "p = " << fmt(cfg.p) << "\n";
  if (cfg.alpha) out << "alpha = " << fmt(*cfg.alpha) << "\n";
  out << "L.base = " << fmt(cfg.L_base) << "\n";
  out << "L.start = " << cfg.L_start << "\n";
  out << "L.count = " << cfg.L_count << "\n";
  out << "eps.start = " << fmt(cfg.eps_start) << "\n";
  out << "eps.ratio = " << fmt(cfg.eps_ratio) << "\n";
  out << "eps.count = " << cfg.eps_count << "\n";
  out << "quad.radial = " << cfg.quad.radial_samples << "\n";
  out << "quad.angular = " << cfg.quad.angular_order << "\n";
  out << "quad.per_oscillation = " << cfg.quad.min_per_oscillation << "\n";
  out << "quad.cap = " << cfg.quad.sample_cap << "\n";
  out << "quad.tol = " << fmt(cfg.ft_tol) << "\n";
  out << "quad.max_depth = " << cfg.ft_max_depth << "\n";
  out << "xi.min = " << fmt(cfg.xi_min) << "\n";
  out << "xi.max = " << fmt(cfg.xi_max) << "\n";
  out << "xi.count = " << cfg.xi_count << "\n";
  out << "points = "
      << (cfg.point_source == PointSource::kCylinders ? "cylinders" : "chaos")
      << "\n";
  out << "samples = " << cfg.chaos_samples << "\n";
  out << "band.factor = " << fmt(cfg.band_factor) << "\n";
  out << "ceiling = " << fmt(cfg.ceiling) << "\n";
  out << "budget = " << cfg.budget << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "threads = " << cfg.threads << "\n";
  out << "out = " << cfg.out_dir << "\n";
  return out.str();
}

}  // namespace fraclab::config
