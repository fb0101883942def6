#include "fdim/io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace fdm::io {

using nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

namespace {

ordered_json vec_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json mat_json(const Mat& m) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

// Non-finite slopes (fully floored directions) become null.
ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json fit_json(const DecayFit& f) {
  ordered_json j;
  j["slope"] = num(f.slope);
  j["intercept"] = num(f.intercept);
  j["max_residual"] = f.max_residual;
  j["floor_hit"] = f.floor_hit;
  j["slope_is_bound"] = f.slope_is_bound;
  j["all_floored"] = f.all_floored;
  ordered_json samples = ordered_json::array();
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const auto& s = f.samples[i];
    samples.push_back({{"rho", s.rho},
                       {"re", s.value.real()},
                       {"im", s.value.imag()},
                       {"abs", std::abs(s.value)},
                       {"quadrature_error_estimate", s.error_estimate},
                       {"floored", i < f.floored.size() && f.floored[i]},
                       {"skipped", s.skipped}});
  }
  j["samples"] = samples;
  return j;
}

ordered_json header(std::optional<double> runtime_ms) {
  ordered_json j;
  j["schema"] = "1";
  if (runtime_ms) j["runtime_ms"] = *runtime_ms;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string direction_header(int dim) {
  std::string h;
  for (int i = 0; i < dim; ++i) h += "xi" + std::to_string(i + 1) + ",";
  return h;
}

}  // namespace

std::string decay_csv(const std::vector<DecayRow>& rows) {
  std::ostringstream out;
  const int dim = rows.empty() ? 0 : static_cast<int>(rows.front().direction.size());
  out << "rho," << direction_header(dim) << "re,im,abs,quadrature_error_estimate\n";
  for (const auto& r : rows) {
    out << fmt(r.rho) << ',';
    for (int i = 0; i < r.direction.size(); ++i) out << fmt(r.direction[i]) << ',';
    out << fmt(r.value.real()) << ',' << fmt(r.value.imag()) << ',' << fmt(std::abs(r.value))
        << ',' << fmt(r.error_estimate) << '\n';
  }
  return out.str();
}

std::string decay_json(const std::string& surface, const std::vector<DecayRow>& rows,
                       const std::vector<DirectionFit>& fits, std::optional<double> runtime_ms) {
  ordered_json j = header(runtime_ms);
  j["surface"] = surface;
  ordered_json arr = ordered_json::array();
  for (const auto& f : fits) {
    ordered_json e;
    e["direction"] = vec_json(f.direction);
    e["fit"] = fit_json(f.fit);
    arr.push_back(e);
  }
  j["fits"] = arr;
  j["sample_count"] = rows.size();
  return dump(j);
}

std::string stationary_csv(const AsymptoticScan& scan) {
  std::ostringstream out;
  out << "rho,lambda,re,im,abs,leading_re,leading_im,scaled_error\n";
  for (const auto& r : scan.rows) {
    out << fmt(r.lambda / (2.0 * std::numbers::pi)) << ',' << fmt(r.lambda) << ','
        << fmt(r.value.real()) << ',' << fmt(r.value.imag()) << ',' << fmt(std::abs(r.value)) << ','
        << fmt(r.leading.real()) << ',' << fmt(r.leading.imag()) << ',' << fmt(r.scaled_error)
        << '\n';
  }
  return out.str();
}

std::string stationary_json(const std::string& label, const AsymptoticScan& scan,
                            std::optional<double> runtime_ms) {
  ordered_json j = header(runtime_ms);
  j["label"] = label;
  ordered_json pts = ordered_json::array();
  for (const auto& p : scan.points) {
    pts.push_back({{"z0", vec_json(p.z0)},
                   {"phase_value", p.phase_value},
                   {"hessian", mat_json(p.hessian)},
                   {"signature_m", p.signature_m},
                   {"det", p.det},
                   {"amplitude", p.amplitude}});
  }
  j["critical_points"] = pts;
  ordered_json rows = ordered_json::array();
  for (const auto& r : scan.rows) {
    rows.push_back({{"rho", r.lambda / (2.0 * std::numbers::pi)},
                    {"lambda", r.lambda},
                    {"re", r.value.real()},
                    {"im", r.value.imag()},
                    {"leading_re", r.leading.real()},
                    {"leading_im", r.leading.imag()},
                    {"quadrature_error_estimate", r.error_estimate},
                    {"scaled_error", r.scaled_error}});
  }
  j["rows"] = rows;
  j["scaled_error_ratio"] = scan.ratio;
  return dump(j);
}

std::string certificate_csv(const DimensionCertificate& cert) {
  std::ostringstream out;
  out << "rho,re,im,abs,quadrature_error_estimate,floored\n";
  const auto& f = cert.nu_fit;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const auto& s = f.samples[i];
    out << fmt(s.rho) << ',' << fmt(s.value.real()) << ',' << fmt(s.value.imag()) << ','
        << fmt(std::abs(s.value)) << ',' << fmt(s.error_estimate) << ','
        << (i < f.floored.size() && f.floored[i] ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string certificate_json(const DimensionCertificate& cert, std::optional<double> runtime_ms) {
  ordered_json j = header(runtime_ms);
  j["surface"] = cert.surface;
  j["mode"] = cert.mode;
  j["k"] = cert.k;
  j["d"] = cert.d;
  j["upper_direction"] = vec_json(cert.upper_direction);
  j["nu_slope"] = num(cert.nu_fit.slope);
  j["nu_fit"] = fit_json(cert.nu_fit);
  ordered_json mus = ordered_json::array();
  for (const auto& f : cert.mu_scan.fits)
    mus.push_back({{"direction", vec_json(f.direction)},
                   {"slope", num(f.fit.slope)},
                   {"slope_is_bound", f.fit.slope_is_bound},
                   {"all_floored", f.fit.all_floored}});
  j["mu_slopes"] = mus;
  j["mu_best_slope"] = num(cert.mu_best_slope);
  ordered_json tr = ordered_json::array();
  for (const auto& t : cert.transfer)
    tr.push_back({{"rho", t.rho}, {"nu_abs", t.nu_abs}, {"bound", t.bound}, {"holds", t.holds}});
  j["transfer"] = tr;
  j["transfer_ok"] = cert.transfer_ok;
  if (cert.mode == "ruled")
    j["constancy"] = {{"passed", cert.constancy.passed},
                      {"max_normal_deviation", cert.constancy.max_normal_deviation},
                      {"max_ruling_pairing", cert.constancy.max_ruling_pairing},
                      {"points_checked", cert.constancy.points_checked}};
  j["dimension_interval"] = {cert.dimension_lo, cert.dimension_hi};
  j["tolerances"] = {{"slope", cert.slope_tol}, {"floor_relative", kFloorRelative}};
  j["verdict"] = cert.pass ? "pass" : "fail";
  if (!cert.reason.empty()) j["reason"] = cert.reason;
  return dump(j);
}

std::string curvature_csv(const std::vector<ShapeReport>& rows, const std::vector<Vec>& points) {
  std::ostringstream out;
  out << "point,unit_normal,principal_curvatures,rank\n";
  auto join = [](const auto& v, auto size) {
    std::string s;
    for (decltype(size) i = 0; i < size; ++i) s += (i ? " " : "") + fmt(v[i]);
    return s;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << join(points[i], points[i].size()) << ',' << join(r.unit_normal, r.unit_normal.size())
        << ',' << join(r.principal_curvatures, r.principal_curvatures.size()) << ',' << r.rank
        << '\n';
  }
  return out.str();
}

std::string curvature_json(const std::string& surface, const std::vector<ShapeReport>& rows,
                           const std::vector<Vec>& points, std::optional<double> runtime_ms) {
  ordered_json j = header(runtime_ms);
  j["surface"] = surface;
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    arr.push_back({{"point", vec_json(points[i])},
                   {"unit_normal", vec_json(r.unit_normal)},
                   {"second_fundamental_form", mat_json(r.second_fundamental_form)},
                   {"principal_curvatures", r.principal_curvatures},
                   {"rank", r.rank}});
  }
  j["reports"] = arr;
  return dump(j);
}

std::string product_json(const ProductRuleReport& rep, std::optional<double> runtime_ms) {
  ordered_json j = header(runtime_ms);
  j["factorization_error"] = rep.factorization_error;
  j["axis_slope"] = num(rep.axis_fit.slope);
  j["factor_axis_slope"] = num(rep.factor_axis_fit.slope);
  j["axis_ok"] = rep.axis_ok;
  j["summary_slope"] = num(rep.summary_slope);
  j["factor_summary_slopes"] = {num(rep.factor_summary_slopes[0]),
                                num(rep.factor_summary_slopes[1])};
  j["scan_ok"] = rep.scan_ok;
  j["verdict"] = rep.pass ? "pass" : "fail";
  return dump(j);
}

std::string surfaces_csv(const std::vector<SurfaceEntry>& entries) {
  std::ostringstream out;
  out << "name,family,ambient_dim,param_dim,rank,dimF,control\n";
  for (const auto& e : entries)
    out << e.name << ',' << e.family << ',' << e.chart.ambient_dim << ',' << e.chart.param_dim()
        << ',' << e.expected_rank << ',' << e.expected_fourier_dim << ',' << (e.control ? 1 : 0)
        << '\n';
  return out.str();
}

std::string surfaces_json(const std::vector<SurfaceEntry>& entries) {
  ordered_json j = header(std::nullopt);
  ordered_json arr = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json s;
    s["name"] = e.name;
    s["family"] = e.family;
    s["description"] = e.description;
    s["ambient_dim"] = e.chart.ambient_dim;
    s["expected_rank"] = e.expected_rank;
    s["expected_fourier_dim"] = e.expected_fourier_dim;
    s["control"] = e.control;
    s["density_inner"] = e.density_inner;
    s["density_outer"] = e.density_outer;
    ordered_json u = ordered_json::array(), v = ordered_json::array();
    for (const auto& iv : e.chart.u_domain.axes) u.push_back({iv.lo, iv.hi});
    for (const auto& iv : e.chart.v_domain.axes) v.push_back({iv.lo, iv.hi});
    s["u_domain"] = u;
    s["v_domain"] = v;
    arr.push_back(s);
  }
  j["surfaces"] = arr;
  return dump(j);
}

}  // namespace fdm::io
