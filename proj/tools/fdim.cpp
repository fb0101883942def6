#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdim/analysis.hpp"
#include "fdim/catalog.hpp"
#include "fdim/errors.hpp"
#include "fdim/io.hpp"
#include "fdim/morse.hpp"

namespace {

using namespace fdm;

enum Exit { kOk = 0, kVerdictFail = 2, kNumerical = 3, kConfig = 4 };

struct Config {
  std::string surface;
  std::string second;
  std::string catalog_path;
  int rho_min = 4;
  int rho_max = 12;
  std::string direction = "normal";
  int grid = 64;
  std::optional<double> tol;
  std::string out;
  std::string format;
  std::string point;
  bool timing = false;
  bool no_scan = false;
};

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

Vec to_vec(const std::vector<double>& xs) {
  Vec v(static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v[static_cast<int>(i)] = xs[i];
  return v;
}

std::vector<SurfaceEntry> entries(const Config& c) {
  return c.catalog_path.empty() ? catalog() : load_catalog(c.catalog_path);
}

SurfaceEntry lookup(const Config& c, const std::string& name) {
  if (name.empty()) throw ConfigError("--surface is required");
  for (auto& e : entries(c))
    if (e.name == name) return e;
  throw ConfigError("unknown surface '" + name + "'");
}

void check_range(const Config& c) {
  if (c.rho_min >= c.rho_max) throw ConfigError("--rho-min must be below --rho-max");
  if (c.rho_max > 20 || c.rho_min < 0) throw ConfigError("rho exponents must lie in [0, 20]");
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + c.out + "'");
  f << text;
}

class Timer {
 public:
  std::optional<double> ms(bool enabled) const {
    if (!enabled) return std::nullopt;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

int cmd_surfaces(const Config& c) {
  const auto list = entries(c);
  if (c.format == "csv") {
    emit(c, io::surfaces_csv(list));
  } else if (c.format == "json") {
    emit(c, io::surfaces_json(list));
  } else {
    std::ostringstream out;
    for (const auto& e : list) {
      out << e.name << " rank=" << e.expected_rank << " dimF=" << e.expected_fourier_dim
          << " R^" << e.chart.ambient_dim << (e.control ? " control" : "") << "  "
          << e.description << '\n';
    }
    emit(c, out.str());
  }
  return kOk;
}

int cmd_curvature(const Config& c) {
  const SurfaceEntry e = lookup(c, c.surface);
  const Chart chart = e.chart.chart();
  std::vector<Vec> points;
  if (c.point.empty()) {
    points = box_grid(chart.domain(), 3);
  } else {
    const Vec p = to_vec(parse_numbers(c.point));
    if (p.size() != chart.param_dim())
      throw ConfigError("--point needs " + std::to_string(chart.param_dim()) + " coordinates");
    if (!chart.domain().contains(p, 1e-12)) throw ConfigError("--point lies outside the chart domain");
    points.push_back(p);
  }
  const Timer timer;
  std::vector<ShapeReport> rows;
  for (const Vec& p : points) rows.push_back(shape_report(chart, p));
  if (c.format == "json") {
    emit(c, io::curvature_json(e.name, rows, points, timer.ms(c.timing)));
  } else if (c.format == "csv") {
    emit(c, io::curvature_csv(rows, points));
  } else {
    std::ostringstream out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      out << "point";
      for (int j = 0; j < points[i].size(); ++j) out << ' ' << io::fmt(points[i][j]);
      out << "\n  normal";
      for (int j = 0; j < r.unit_normal.size(); ++j) out << ' ' << io::fmt(r.unit_normal[j]);
      out << "\n  second fundamental form";
      for (int a = 0; a < r.second_fundamental_form.rows(); ++a) {
        out << "\n   ";
        for (int b = 0; b < r.second_fundamental_form.cols(); ++b)
          out << ' ' << io::fmt(r.second_fundamental_form(a, b));
      }
      out << "\n  principal curvatures";
      for (double k : r.principal_curvatures) out << ' ' << io::fmt(k);
      out << "\n  rank " << r.rank << '\n';
    }
    emit(c, out.str());
  }
  return kOk;
}

int cmd_decay(const Config& c) {
  check_range(c);
  const SurfaceEntry e = lookup(c, c.surface);
  SurfaceMeasure mu =
      SurfaceMeasure::with_default_density(e.chart, e.density_inner, e.density_outer);
  if (c.tol) mu.set_tolerance(*c.tol);
  const int dim = mu.ambient_dim();
  std::vector<Vec> dirs;
  if (c.direction == "normal") {
    dirs.push_back(mu.reference_direction());
  } else if (c.direction.rfind("grid:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(c.direction.substr(5));
    } catch (const std::exception&) {
      throw ConfigError("bad direction grid '" + c.direction + "'");
    }
    if (n < 16) throw ConfigError("direction grids need at least 16 points");
    dirs = sphere_directions(dim, n);
  } else {
    Vec d = to_vec(parse_numbers(c.direction));
    if (d.size() != dim) throw ConfigError("--direction needs " + std::to_string(dim) + " components");
    if (d.norm() == 0.0) throw ConfigError("--direction must be nonzero");
    dirs.push_back(d / d.norm());
  }
  const Timer timer;
  const auto rhos = dyadic_rhos(c.rho_min, c.rho_max);
  std::vector<io::DecayRow> rows;
  std::vector<DirectionFit> fits;
  for (const Vec& d : dirs) {
    DirectionFit df;
    df.direction = d;
    const auto samples = sample_along(mu, d, rhos, dirs.size() > 1 ? 2 : 0);
    for (const auto& s : samples) rows.push_back({s.rho, d, s.value, s.error_estimate});
    try {
      df.fit = fit_decay(samples, mu.mass());
    } catch (const AllFloored&) {
      df.fit.samples = samples;
      df.fit.floored.assign(samples.size(), true);
      df.fit.all_floored = df.fit.floor_hit = df.fit.slope_is_bound = true;
      df.fit.slope = -std::numeric_limits<double>::infinity();
    }
    fits.push_back(df);
  }
  if (c.format == "json") {
    emit(c, io::decay_json(e.name, rows, fits, timer.ms(c.timing)));
  } else {
    emit(c, io::decay_csv(rows));
    for (const auto& f : fits)
      std::cerr << "slope " << io::fmt(f.fit.slope) << (f.fit.slope_is_bound ? " (bound)" : "")
                << '\n';
  }
  return kOk;
}

int cmd_certificate(const Config& c) {
  check_range(c);
  const SurfaceEntry e = lookup(c, c.surface);
  CertificateParams p;
  p.rho_min_exp = c.rho_min;
  p.rho_max_exp = c.rho_max;
  p.grid = c.grid;
  if (c.tol) p.slope_tol = *c.tol;
  p.mu_scan = !c.no_scan;
  const Timer timer;
  const DimensionCertificate cert = certificate(e, p);
  emit(c, c.format == "csv" ? io::certificate_csv(cert)
                            : io::certificate_json(cert, timer.ms(c.timing)));
  return cert.pass ? kOk : kVerdictFail;
}

int cmd_stationary(const Config& c) {
  if (c.rho_min >= c.rho_max) throw ConfigError("--rho-min must be below --rho-max");
  const SurfaceEntry e = lookup(c, c.surface);
  const RuledChart& rc = e.chart;
  if (c.point.empty()) throw ConfigError("--point t,v is required");
  const Vec p = to_vec(parse_numbers(c.point));
  if (p.size() != rc.param_dim() || rc.base_dim < 1)
    throw ConfigError("--point needs " + std::to_string(rc.param_dim()) + " coordinates on a ruled chart");
  if (!rc.u_domain.contains(rc.split_u(p), 1e-12))
    throw ConfigError("base point lies outside the chart domain");
  const Timer timer;
  const AsymptoticScan scan = stationary_scan(rc, rc.split_u(p), rc.split_v(p),
                                              dyadic_rhos(c.rho_min, c.rho_max), c.tol.value_or(1e-12));
  if (c.format == "json")
    emit(c, io::stationary_json(e.name, scan, timer.ms(c.timing)));
  else
    emit(c, io::stationary_csv(scan));
  std::cerr << "scaled error max/min ratio " << io::fmt(scan.ratio) << '\n';
  return kOk;
}

int cmd_product(const Config& c) {
  check_range(c);
  const SurfaceEntry a = lookup(c, c.surface.empty() ? "circle_arc" : c.surface);
  const SurfaceEntry b = lookup(c, c.second.empty() ? a.name : c.second);
  auto ma = std::make_shared<SurfaceMeasure>(
      SurfaceMeasure::with_default_density(a.chart, a.density_inner, a.density_outer));
  auto mb = std::make_shared<SurfaceMeasure>(
      SurfaceMeasure::with_default_density(b.chart, b.density_inner, b.density_outer));
  const Timer timer;
  const ProductRuleReport rep =
      product_rule_check(ma, mb, c.grid, c.rho_min, c.rho_max, c.tol.value_or(0.05));
  emit(c, io::product_json(rep, timer.ms(c.timing)));
  return rep.pass ? kOk : kVerdictFail;
}

int cmd_morse(const Config& c) {
  std::ostringstream out;
  bool ok = true;
  if (c.format == "csv") out << "phase,n,m,half_width,max_reconstruction_error,identity_residual\n";
  for (const MorsePhase& ph : morse_examples()) {
    const MorseNormalization mn = morse_normalize(ph.f, ph.hessian, ph.z0);
    ok = ok && mn.max_reconstruction_error() < 1e-8 && mn.identity_residual() < 1e-6;
    if (c.format == "csv") {
      out << ph.name << ',' << mn.n() << ',' << mn.m() << ',' << io::fmt(mn.half_width()) << ','
          << io::fmt(mn.max_reconstruction_error()) << ',' << io::fmt(mn.identity_residual()) << '\n';
    } else {
      out << ph.name << ": n=" << mn.n() << " m=" << mn.m() << " half_width=" << io::fmt(mn.half_width())
          << " reconstruction=" << io::fmt(mn.max_reconstruction_error())
          << " identity=" << io::fmt(mn.identity_residual()) << '\n';
    }
  }
  emit(c, out.str());
  return ok ? kOk : kVerdictFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier decay and dimension certificates for constant-rank hypersurfaces"};
  app.require_subcommand(1);
  Config c;
  app.add_option("--catalog", c.catalog_path, "JSON surface catalog replacing the built-in one");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "Output file (stdout when omitted)");
    sub->add_flag("--timing", c.timing, "Include runtime_ms in JSON output");
  };
  auto range = [&](CLI::App* sub) {
    sub->add_option("--rho-min", c.rho_min, "Smallest dyadic exponent of rho");
    sub->add_option("--rho-max", c.rho_max, "Largest dyadic exponent of rho");
  };

  auto* surfaces = app.add_subcommand("surfaces", "List catalog surfaces");
  common(surfaces);
  surfaces->add_option("--format", c.format, "text, csv or json")
      ->check(CLI::IsMember({"csv", "json", "text"}));

  auto* curvature = app.add_subcommand("curvature", "Normal, second fundamental form, rank");
  common(curvature);
  curvature->add_option("--surface", c.surface)->required();
  curvature->add_option("--point", c.point, "Parameter point p1,p2,... (default: 3^d grid)");
  curvature->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json", "text"}));

  auto* decay = app.add_subcommand("decay", "Sample |mu^(rho xi)| and fit the decay slope");
  common(decay);
  range(decay);
  decay->add_option("--surface", c.surface)->required();
  decay->add_option("--direction", c.direction, "normal, x,y,z or grid:N");
  decay->add_option("--tol", c.tol, "Relative quadrature tolerance");
  decay->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}));

  auto* cert = app.add_subcommand("certificate", "Fourier-dimension certificate");
  common(cert);
  range(cert);
  cert->add_option("--surface", c.surface)->required();
  cert->add_option("--grid", c.grid, "Directions in the mu^ scan")->check(CLI::Range(16, 100000));
  cert->add_option("--tol", c.tol, "Slope tolerance");
  cert->add_flag("--no-scan", c.no_scan, "Skip the direction scan of mu^");
  cert->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}));

  auto* stat = app.add_subcommand("stationary", "Inner integral against its stationary-phase term");
  common(stat);
  stat->add_option("--surface", c.surface)->required();
  stat->add_option("--point", c.point, "Base and ruling parameters t,v")->required();
  stat->add_option("--rho-min", c.rho_min);
  stat->add_option("--rho-max", c.rho_max);
  stat->add_option("--tol", c.tol, "Relative quadrature tolerance");
  stat->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}));

  auto* product = app.add_subcommand("product-check", "Product rule for two catalog curves or surfaces");
  common(product);
  range(product);
  product->add_option("--surface", c.surface, "First factor (default circle_arc)");
  product->add_option("--second", c.second, "Second factor (default: the first)");
  product->add_option("--grid", c.grid)->check(CLI::Range(16, 100000));
  product->add_option("--tol", c.tol, "Slope tolerance");

  auto* morse = app.add_subcommand("morse-demo", "Morse normal forms of the example phases");
  common(morse);
  morse->add_option("--format", c.format)->check(CLI::IsMember({"csv", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*surfaces) return cmd_surfaces(c);
    if (*curvature) return cmd_curvature(c);
    if (*decay) return cmd_decay(c);
    if (*cert) return cmd_certificate(c);
    if (*stat) return cmd_stationary(c);
    if (*product) return cmd_product(c);
    if (*morse) return cmd_morse(c);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const AmbientDimError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const RankMismatch& e) {
    std::cerr << "rank mismatch: " << e.what() << '\n';
    return kVerdictFail;
  } catch (const QuadratureNotConverged& e) {
    std::cerr << "numerical failure: " << e.what() << " (last two values "
              << io::fmt(e.previous().real()) << ' ' << io::fmt(e.previous().imag()) << "i, "
              << io::fmt(e.last().real()) << ' ' << io::fmt(e.last().imag()) << "i)\n";
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kConfig;
}
