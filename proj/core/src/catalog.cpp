#include "fdim/catalog.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fdim/errors.hpp"

namespace fdm {

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Jet constant_jet(const Vec& value, int k) {
  Jet j;
  j.value = value;
  j.d1 = Mat::Zero(value.size(), k);
  j.d2 = SecondPartials(k, static_cast<int>(value.size()));
  return j;
}

Jet curve_jet(const Vec& f, const Vec& f1, const Vec& f2) {
  Jet j;
  j.value = f;
  j.d1 = Mat(f.size(), 1);
  j.d1.col(0) = f1;
  j.d2 = SecondPartials(1, static_cast<int>(f.size()));
  j.d2(0, 0) = f2;
  return j;
}

Box box1(double lo, double hi) { return Box({{lo, hi}}); }
Box box2(double a, double b, double c, double d) { return Box({{a, b}, {c, d}}); }

struct Family {
  const char* name;
  RuledChart (*make)(const Box& u, const Box& v);
};

RuledChart hyperplane(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 3;
  c.base_dim = 0;
  c.u_domain = u;
  c.v_domain = v;
  c.alpha = [](const Vec&) { return constant_jet(Vec::Zero(3), 0); };
  c.rulings = {[](const Vec&) { return constant_jet(vec({1, 0, 0}), 0); },
               [](const Vec&) { return constant_jet(vec({0, 1, 0}), 0); }};
  return c;
}

RuledChart cylinder(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 3;
  c.base_dim = 1;
  c.u_domain = u;
  c.v_domain = v;
  c.alpha = [](const Vec& p) {
    const double ct = std::cos(p[0]), st = std::sin(p[0]);
    return curve_jet(vec({ct, st, 0}), vec({-st, ct, 0}), vec({-ct, -st, 0}));
  };
  c.rulings = {[](const Vec&) { return constant_jet(vec({0, 0, 1}), 1); }};
  return c;
}

RuledChart sphere_graph(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 3;
  c.base_dim = 2;
  c.u_domain = u;
  c.v_domain = v;
  c.alpha = [](const Vec& p) {
    const double x = p[0], y = p[1];
    const double r = std::sqrt(1.0 - x * x - y * y);
    const double r3 = r * r * r;
    Jet j;
    j.value = vec({x, y, r});
    j.d1 = Mat(3, 2);
    j.d1.col(0) = vec({1, 0, -x / r});
    j.d1.col(1) = vec({0, 1, -y / r});
    j.d2 = SecondPartials(2, 3);
    j.d2(0, 0) = vec({0, 0, -1.0 / r - x * x / r3});
    j.d2(1, 1) = vec({0, 0, -1.0 / r - y * y / r3});
    j.d2(0, 1) = vec({0, 0, -x * y / r3});
    j.d2(1, 0) = j.d2(0, 1);
    return j;
  };
  return c;
}

RuledChart light_cone(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 3;
  c.base_dim = 1;
  c.u_domain = u;
  c.v_domain = v;
  c.alpha = [](const Vec&) { return constant_jet(Vec::Zero(3), 1); };
  c.rulings = {[](const Vec& p) {
    const double ct = std::cos(p[0]), st = std::sin(p[0]);
    return curve_jet(vec({ct, st, 1}), vec({-st, ct, 0}), vec({-ct, -st, 0}));
  }};
  return c;
}

RuledChart helix_tangent(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 3;
  c.base_dim = 1;
  c.u_domain = u;
  c.v_domain = v;
  c.alpha = [](const Vec& p) {
    const double t = p[0];
    return curve_jet(vec({t, t * t, t * t * t}), vec({1, 2 * t, 3 * t * t}), vec({0, 2, 6 * t}));
  };
  c.rulings = {[](const Vec& p) {
    const double t = p[0];
    return curve_jet(vec({1, 2 * t, 3 * t * t}), vec({0, 2, 6 * t}), vec({0, 0, 6}));
  }};
  c.reference_normal = [](const Vec& p) {
    const double t = p[0];
    return curve_jet(vec({3 * t * t, -3 * t, 1}), vec({6 * t, -3, 0}), vec({6, 0, 0}));
  };
  return c;
}

RuledChart perturbed_helix(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 3;
  c.base_dim = 1;
  c.u_domain = u;
  c.v_domain = v;
  c.alpha = [](const Vec& p) {
    const double t = p[0], t2 = t * t;
    return curve_jet(vec({t, t2 + t2 * t2, t2 * t}), vec({1, 2 * t + 4 * t2 * t, 3 * t2}),
                     vec({0, 2 + 12 * t2, 6 * t}));
  };
  c.rulings = {[](const Vec& p) {
    const double t = p[0], t2 = t * t;
    return curve_jet(vec({1, 2 * t + 4 * t2 * t, 3 * t2}), vec({0, 2 + 12 * t2, 6 * t}),
                     vec({0, 24 * t, 6}));
  }};
  c.reference_normal = [](const Vec& p) {
    const double s = p[0], s2 = s * s;
    return curve_jet(vec({-6 * s2 * s2 + 3 * s2, -3 * s, 6 * s2 + 1}),
                     vec({-24 * s2 * s + 6 * s, -3, 12 * s}), vec({-72 * s2 + 6, 0, 12}));
  };
  return c;
}

RuledChart moment_curve_tangent(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 4;
  c.base_dim = 1;
  c.u_domain = u;
  c.v_domain = v;
  // gamma(t) = (t, t^2, t^3, t^4) and its derivatives up to order four.
  auto g = [](double t, int order) {
    const double t2 = t * t, t3 = t2 * t;
    switch (order) {
      case 0: return vec({t, t2, t3, t2 * t2});
      case 1: return vec({1, 2 * t, 3 * t2, 4 * t3});
      case 2: return vec({0, 2, 6 * t, 12 * t2});
      case 3: return vec({0, 0, 6, 24 * t});
      default: return vec({0, 0, 0, 24});
    }
  };
  c.alpha = [g](const Vec& p) { return curve_jet(g(p[0], 0), g(p[0], 1), g(p[0], 2)); };
  c.rulings = {[g](const Vec& p) { return curve_jet(g(p[0], 1), g(p[0], 2), g(p[0], 3)); },
               [g](const Vec& p) { return curve_jet(g(p[0], 2), g(p[0], 3), g(p[0], 4)); }};
  c.reference_normal = [](const Vec& p) {
    const double s = p[0];
    return curve_jet(vec({-4 * s * s * s, 6 * s * s, -4 * s, 1}), vec({-12 * s * s, 12 * s, -4, 0}),
                     vec({-24 * s, 12, 0, 0}));
  };
  return c;
}

RuledChart hyperboloid(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 3;
  c.base_dim = 1;
  c.u_domain = u;
  c.v_domain = v;
  c.alpha = [](const Vec& p) {
    const double ct = std::cos(p[0]), st = std::sin(p[0]);
    return curve_jet(vec({ct, st, 0}), vec({-st, ct, 0}), vec({-ct, -st, 0}));
  };
  c.rulings = {[](const Vec& p) {
    const double ct = std::cos(p[0]), st = std::sin(p[0]);
    return curve_jet(vec({-st, ct, 1}), vec({-ct, -st, 0}), vec({st, -ct, 0}));
  }};
  return c;
}

RuledChart circle_arc(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 2;
  c.base_dim = 1;
  c.u_domain = u;
  c.v_domain = v;
  c.alpha = [](const Vec& p) {
    const double ct = std::cos(p[0]), st = std::sin(p[0]);
    return curve_jet(vec({st, ct}), vec({ct, -st}), vec({-st, -ct}));
  };
  return c;
}

// (t, s) -> (t, sin(mt) e^{-m^2 s})_{m=1,2,3}, ruled by the t-derivative.
RuledChart rank2_r4(const Box& u, const Box& v) {
  RuledChart c;
  c.ambient_dim = 4;
  c.base_dim = 2;
  c.u_domain = u;
  c.v_domain = v;
  c.alpha = [](const Vec& p) {
    const double t = p[0], s = p[1];
    Jet j;
    j.value = vec({t, 0, 0, 0});
    j.d1 = Mat::Zero(4, 2);
    j.d1(0, 0) = 1.0;
    j.d2 = SecondPartials(2, 4);
    for (int m = 1; m <= 3; ++m) {
      const double e = std::exp(-m * m * s), sn = std::sin(m * t), cs = std::cos(m * t);
      const double m2 = m * m;
      j.value[m] = sn * e;
      j.d1(m, 0) = m * cs * e;
      j.d1(m, 1) = -m2 * sn * e;
      j.d2(0, 0)[m] = -m2 * sn * e;
      j.d2(0, 1)[m] = -m2 * m * cs * e;
      j.d2(1, 0)[m] = -m2 * m * cs * e;
      j.d2(1, 1)[m] = m2 * m2 * sn * e;
    }
    return j;
  };
  c.rulings = {[](const Vec& p) {
    const double t = p[0], s = p[1];
    Jet j;
    j.value = vec({1, 0, 0, 0});
    j.d1 = Mat::Zero(4, 2);
    j.d2 = SecondPartials(2, 4);
    for (int m = 1; m <= 3; ++m) {
      const double e = std::exp(-m * m * s), sn = std::sin(m * t), cs = std::cos(m * t);
      const double m2 = m * m;
      j.value[m] = m * cs * e;
      j.d1(m, 0) = -m2 * sn * e;
      j.d1(m, 1) = -m2 * m * cs * e;
      j.d2(0, 0)[m] = -m2 * m * cs * e;
      j.d2(0, 1)[m] = m2 * m2 * sn * e;
      j.d2(1, 0)[m] = m2 * m2 * sn * e;
      j.d2(1, 1)[m] = m2 * m2 * m * cs * e;
    }
    return j;
  }};
  return c;
}

const Family kFamilies[] = {
    {"hyperplane", hyperplane},
    {"cylinder", cylinder},
    {"sphere_graph", sphere_graph},
    {"light_cone", light_cone},
    {"helix_tangent", helix_tangent},
    {"perturbed_helix", perturbed_helix},
    {"moment_curve_tangent", moment_curve_tangent},
    {"hyperboloid", hyperboloid},
    {"circle_arc", circle_arc},
    {"rank2_r4", rank2_r4},
};

SurfaceEntry entry(const char* name, const char* family, Box u, Box v, int rank, int dimf,
                   const char* description, bool control = false) {
  SurfaceEntry e;
  e.name = name;
  e.family = family;
  e.chart = make_family(family, u, v);
  e.expected_rank = rank;
  e.expected_fourier_dim = dimf;
  e.description = description;
  e.control = control;
  return e;
}

// A wide taper keeps the boundary terms of the stationary-phase expansion small
// at moderate rho, which matters when the support is small against the curvature radius.
SurfaceEntry with_density(SurfaceEntry e, double inner, double outer) {
  e.density_inner = inner;
  e.density_outer = outer;
  return e;
}

Box parse_box(const nlohmann::json& j) {
  Box b;
  for (const auto& ax : j) {
    if (!ax.is_array() || ax.size() != 2) throw ConfigError("domain axes must be [lo, hi] pairs");
    const double lo = ax[0].get<double>(), hi = ax[1].get<double>();
    if (!(hi > lo)) throw ConfigError("domain axis must satisfy lo < hi");
    b.axes.push_back({lo, hi});
  }
  return b;
}

}  // namespace

std::vector<std::string> family_names() {
  std::vector<std::string> out;
  for (const auto& f : kFamilies) out.emplace_back(f.name);
  return out;
}

RuledChart make_family(const std::string& family, const Box& u_domain, const Box& v_domain) {
  for (const auto& f : kFamilies) {
    if (family != f.name) continue;
    RuledChart c = f.make(u_domain, v_domain);
    if (u_domain.dim() != c.base_dim || v_domain.dim() != c.num_rulings())
      throw ConfigError("domain dimensions do not match family '" + family + "'");
    return c;
  }
  throw ConfigError("unknown surface family '" + family + "'");
}

std::vector<SurfaceEntry> catalog() {
  return {
      entry("hyperplane", "hyperplane", Box(), box2(-0.5, 0.5, -0.5, 0.5), 0, 0,
            "flat plane (u, v, 0)"),
      entry("cylinder", "cylinder", box1(-0.25, 0.25), box1(-0.5, 0.5), 1, 1,
            "circular cylinder (cos t, sin t, h)"),
      with_density(entry("sphere_patch", "sphere_graph", box2(-0.25, 0.25, -0.25, 0.25), Box(),
                         2, 2, "unit sphere graph (u1, u2, sqrt(1 - |u|^2))"),
                   0.05, 1.0),
      entry("light_cone", "light_cone", box1(-0.25, 0.25), box1(1.0, 2.0), 1, 1,
            "light cone h (cos t, sin t, 1)"),
      entry("helix_tangent", "helix_tangent", box1(-0.25, 0.25), box1(1.0, 2.0), 1, 1,
            "tangent surface of (t, t^2, t^3)"),
      entry("perturbed_helix", "perturbed_helix", box1(-0.1, 0.1), box1(1.0, 2.0), 1, 1,
            "tangent surface of (t, t^2 + t^4, t^3)"),
      entry("moment_curve_tangent", "moment_curve_tangent", box1(-0.1, 0.1),
            box2(-0.5, 0.5, 1.0, 2.0), 1, 1,
            "gamma + v1 gamma' + v2 gamma'' for gamma = (t, t^2, t^3, t^4) in R^4"),
      entry("hyperboloid_control", "hyperboloid", box1(-0.25, 0.25), box1(-0.5, 0.5), 2, 2,
            "one-sheeted hyperboloid x^2 + y^2 = z^2 + 1 by its rulings", true),
      entry("circle_arc", "circle_arc", box1(-0.5, 0.5), Box(), 1, 1, "unit circle arc in R^2"),
      entry("rank2_r4", "rank2_r4", box2(0.8, 1.2, 0.0, 0.2), box1(1.0, 1.5), 2, 2,
            "ruled rank-2 hypersurface in R^4 built from sin(m t) e^{-m^2 s}"),
  };
}

SurfaceEntry find_surface(const std::string& name) {
  for (auto& e : catalog())
    if (e.name == name) return e;
  throw ConfigError("unknown surface '" + name + "'");
}

std::vector<SurfaceEntry> parse_catalog(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("catalog is not valid JSON: ") + e.what());
  }
  if (doc.value("schema", std::string()) != "1") throw ConfigError("catalog schema must be \"1\"");
  std::vector<SurfaceEntry> out;
  try {
    for (const auto& s : doc.at("surfaces")) {
      const std::string name = s.at("name").get<std::string>();
      // Without an explicit family the name must be a built-in entry.
      SurfaceEntry base;
      bool have_base = false;
      for (auto& e : catalog())
        if (s.contains("family") ? e.family == s["family"].get<std::string>() : e.name == name) {
          base = e;
          have_base = true;
          break;
        }
      const std::string family = s.contains("family") ? s["family"].get<std::string>()
                                                      : (have_base ? base.family : name);
      Box u = s.contains("u_domain") ? parse_box(s["u_domain"])
                                     : (have_base ? base.chart.u_domain : Box());
      Box v = s.contains("v_domain") ? parse_box(s["v_domain"])
                                     : (have_base ? base.chart.v_domain : Box());
      SurfaceEntry e;
      e.name = name;
      e.family = family;
      e.chart = make_family(family, u, v);
      e.expected_rank = s.at("expected_rank").get<int>();
      e.expected_fourier_dim = s.at("expected_fourier_dim").get<int>();
      e.description = s.value("description", have_base ? base.description : std::string());
      e.control = s.value("control", false);
      e.density_inner = s.value("density_inner", have_base && !s.contains("u_domain") &&
                                                         !s.contains("v_domain")
                                                     ? base.density_inner
                                                     : 0.5);
      e.density_outer = s.value("density_outer", have_base && !s.contains("u_domain") &&
                                                         !s.contains("v_domain")
                                                     ? base.density_outer
                                                     : 0.75);
      if (!(e.density_inner > 0.0 && e.density_inner < e.density_outer && e.density_outer <= 1.0))
        throw ConfigError("density fractions need 0 < inner < outer <= 1");
      out.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed catalog entry: ") + e.what());
  }
  return out;
}

std::vector<SurfaceEntry> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open catalog file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str());
}

}  // namespace fdm
