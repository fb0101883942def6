#include "fdim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fdim/errors.hpp"

namespace fdm {

DecayFit fit_decay(const std::vector<DecaySample>& samples, double mass) {
  if (static_cast<int>(samples.size()) < kMinDecaySamples)
    throw ConfigError("decay fit needs at least 5 samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].rho > samples[i - 1].rho))
      throw ConfigError("decay samples must have strictly increasing rho");
  if (!(samples.front().rho > 0.0)) throw ConfigError("decay samples need rho > 0");

  DecayFit fit;
  fit.samples = samples;
  const double floor = kFloorRelative * std::abs(mass);
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    const bool low = s.skipped || std::abs(s.value) < floor;
    fit.floored.push_back(low);
    fit.floor_hit = fit.floor_hit || low;
    if (!low) {
      xs.push_back(std::log2(s.rho));
      ys.push_back(std::log2(std::abs(s.value)));
    }
  }
  if (xs.empty()) {
    fit.all_floored = true;
    throw AllFloored("every sample lies below the quadrature floor");
  }
  if (xs.size() == 1) {
    // Secant from the surviving sample to the floor at the nearest floored rho.
    std::size_t g = 0;
    while (fit.floored[g]) ++g;
    std::size_t f = g + 1 < samples.size() ? g + 1 : g - 1;
    const double xf = std::log2(samples[f].rho);
    fit.slope = (std::log2(floor) - ys[0]) / (xf - xs[0]);
    fit.intercept = ys[0] - fit.slope * xs[0];
    fit.slope_is_bound = true;
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i)
    fit.max_residual =
        std::max(fit.max_residual, std::abs(ys[i] - (fit.intercept + fit.slope * xs[i])));
  fit.slope_is_bound = fit.floor_hit;
  return fit;
}

std::vector<double> dyadic_rhos(int min_exp, int max_exp) {
  if (min_exp >= max_exp) throw ConfigError("rho range needs min exponent < max exponent");
  std::vector<double> out;
  for (int j = min_exp; j <= max_exp; ++j) out.push_back(std::ldexp(1.0, j));
  return out;
}

std::vector<Vec> sphere_directions(int ambient_dim, int count) {
  std::vector<Vec> out;
  const double pi = std::numbers::pi;
  if (ambient_dim == 2) {
    if (count < 2) throw ConfigError("direction grid needs at least 2 points on S^1");
    for (int i = 0; i < count; ++i) {
      const double t = 0.5 * pi + 2.0 * pi * i / count;
      Vec v(2);
      v << std::cos(t), std::sin(t);
      out.push_back(v);
    }
    return out;
  }
  if (ambient_dim == 3) {
    if (count < 2) throw ConfigError("direction grid needs at least 2 points on S^2");
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * i / (count - 1);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec v(3);
      v << r * std::cos(golden * i), r * std::sin(golden * i), z;
      out.push_back(v);
    }
    return out;
  }
  if (ambient_dim == 4) {
    if (count < 3) throw ConfigError("direction grid needs at least 3 points on S^3");
    // Super-Fibonacci spiral plus the two poles.
    const double phi = std::sqrt(2.0);
    const double psi = 1.533751168755204288118041;
    const int m = count - 2;
    Vec top = Vec::Zero(4);
    top[3] = 1.0;
    out.push_back(top);
    for (int i = 0; i < m; ++i) {
      const double s = i + 0.5;
      const double r = std::sqrt(s / m), R = std::sqrt(1.0 - s / m);
      const double a = 2.0 * pi * s / phi, b = 2.0 * pi * s / psi;
      Vec v(4);
      v << r * std::sin(a), r * std::cos(a), R * std::sin(b), R * std::cos(b);
      out.push_back(v);
    }
    out.push_back(-top);
    return out;
  }
  throw AmbientDimError("direction grids exist for ambient dimensions 2 to 4");
}

std::vector<DecaySample> sample_along(const FourierMeasure& measure, const Vec& direction,
                                      const std::vector<double>& rhos, int stop_after) {
  std::vector<DecaySample> out;
  const double floor = kFloorRelative * std::abs(measure.mass());
  int run = 0;
  for (double rho : rhos) {
    if (stop_after > 0 && run >= stop_after) {
      out.push_back({rho, 0.0, 0.0, true});
      continue;
    }
    const QuadratureResult q = measure.fourier_detail(rho * direction);
    out.push_back({rho, q.value, q.error_estimate});
    run = std::abs(q.value) < floor ? run + 1 : 0;
  }
  return out;
}

DirectionScan direction_scan(const FourierMeasure& measure, const std::vector<Vec>& directions,
                             const std::vector<double>& rhos) {
  DirectionScan scan;
  scan.summary_slope = -std::numeric_limits<double>::infinity();
  for (const Vec& dir : directions) {
    DirectionFit df;
    df.direction = dir;
    const auto samples = sample_along(measure, dir, rhos, 2);
    try {
      df.fit = fit_decay(samples, measure.mass());
    } catch (const AllFloored&) {
      df.fit.samples = samples;
      df.fit.floored.assign(samples.size(), true);
      df.fit.floor_hit = true;
      df.fit.all_floored = true;
      df.fit.slope_is_bound = true;
      df.fit.slope = -std::numeric_limits<double>::infinity();
    }
    if (!df.fit.all_floored && df.fit.slope > scan.summary_slope) {
      scan.summary_slope = df.fit.slope;
      scan.summary_index = static_cast<int>(scan.fits.size());
    }
    scan.fits.push_back(std::move(df));
  }
  return scan;
}

namespace {

void check_rank(const SurfaceEntry& s, int grid) {
  const Chart chart = s.chart.chart();
  for (const Vec& p : box_grid(chart.domain(), grid)) {
    const int r = rank_at(chart, p);
    if (r != s.expected_rank)
      throw RankMismatch("surface '" + s.name + "' has rank " + std::to_string(r) +
                         " at a sampled point, annotation says " +
                         std::to_string(s.expected_rank));
  }
}

Vec density_center(const SurfaceMeasure& m) {
  Vec p(static_cast<int>(m.density_axes().size()));
  for (int a = 0; a < p.size(); ++a) p[a] = m.density_axes()[a].center;
  return p;
}

}  // namespace

DimensionCertificate certificate(const SurfaceEntry& surface, const CertificateParams& params) {
  DimensionCertificate cert;
  cert.surface = surface.name;
  cert.k = surface.expected_rank;
  cert.d = surface.chart.param_dim();
  cert.slope_tol = params.slope_tol;
  check_rank(surface, params.rank_grid);
  const auto rhos = dyadic_rhos(params.rho_min_exp, params.rho_max_exp);
  const double half_k = 0.5 * cert.k;
  const double fi = params.inner_fraction.value_or(surface.density_inner);
  const double fo = params.outer_fraction.value_or(surface.density_outer);

  if (cert.k == 0 || cert.k == cert.d) {
    cert.mode = cert.k == 0 ? "flat" : "full-rank";
    const SurfaceMeasure mu = SurfaceMeasure::with_default_density(surface.chart, fi, fo);
    cert.upper_direction = unit_normal(mu.chart().chart(), density_center(mu));
    cert.nu_fit = fit_decay(sample_along(mu, cert.upper_direction, rhos), mu.mass());
    cert.mu_best_slope = cert.nu_fit.slope;
    const double tol = cert.k == 0 ? params.flat_tol : params.slope_tol;
    cert.pass = std::abs(cert.nu_fit.slope + half_k) <= tol;
    if (!cert.pass) cert.reason = "normal-direction slope outside the tolerance band";
  } else {
    cert.mode = "ruled";
    cert.constancy = check_ruled_constancy(surface.chart);
    if (!cert.constancy.passed) {
      cert.reason = "normals are not constant along the rulings";
      cert.pass = false;
      return cert;
    }
    // Rotate so that the normal at the centre of the base is e_{d+1}.
    const Vec n0 = base_normal_jet(surface.chart, surface.chart.u_domain.center()).normal;
    Vec e = Vec::Zero(surface.chart.ambient_dim);
    e[e.size() - 1] = 1.0;
    const RuledChart rotated =
        transform_ruled(surface.chart, rotation_taking(n0, e), Vec::Zero(e.size()));
    const SurfaceMeasure mu = SurfaceMeasure::with_default_density(rotated, fi, fo);
    const AveragedMeasure nu = AveragedMeasure::with_default_psi(mu, fi, fo);
    cert.upper_direction = e;

    std::vector<DecaySample> samples;
    for (double rho : rhos) {
      const AveragedSample s = nu.fourier_along_axis(rho, params.outer_tol);
      samples.push_back({rho, s.value, s.error_estimate});
      TransferCheck t;
      t.rho = rho;
      t.nu_abs = std::abs(s.value);
      t.bound = nu.psi_l1() * s.max_mu_abs;
      t.holds = t.nu_abs <= t.bound * (1.0 + params.transfer_tol);
      cert.transfer_ok = cert.transfer_ok && t.holds;
      cert.transfer.push_back(t);
    }
    cert.nu_fit = fit_decay(samples, nu.mass());
    if (params.mu_scan) {
      cert.mu_scan = direction_scan(mu, sphere_directions(mu.ambient_dim(), params.grid), rhos);
      cert.mu_best_slope = cert.mu_scan.summary_slope;
    } else {
      cert.mu_best_slope = fit_decay(sample_along(mu, e, rhos), mu.mass()).slope;
    }
    const bool nu_ok = std::abs(cert.nu_fit.slope + half_k) <= params.slope_tol;
    const bool mu_ok = cert.mu_best_slope <= -half_k + params.slope_tol;
    cert.pass = nu_ok && mu_ok && cert.transfer_ok;
    if (!nu_ok) cert.reason = "averaged-measure slope outside the tolerance band";
    else if (!mu_ok) cert.reason = "some direction decays slower than rho^{-k/2}";
    else if (!cert.transfer_ok) cert.reason = "upper-bound transfer inequality violated";
  }
  cert.dimension_lo = -2.0 * cert.nu_fit.slope - 2.0 * params.slope_tol;
  cert.dimension_hi = -2.0 * cert.nu_fit.slope + 2.0 * params.slope_tol;
  return cert;
}

OscillatorySpec ruled_inner_integral(const RuledChart& chart, const Vec& u, const Vec& v,
                                     double psi_inner) {
  if (u.size() != chart.base_dim || v.size() != chart.num_rulings())
    throw ConfigError("point does not match the chart's parameter split");
  const BumpProfile bump(psi_inner);
  Box box;
  std::vector<std::vector<double>> bps;
  for (int j = 0; j < u.size(); ++j) {
    const AxisDensity ax{u[j], bump};
    box.axes.push_back(ax.support());
    bps.push_back(ax.breakpoints());
  }
  OscillatorySpec spec = ruled_phase_spec(chart, u, v, true, box);
  spec.breakpoints = bps;
  for (int j = 0; j < u.size(); ++j) {
    const AxisDensity ax{u[j], bump};
    spec.amplitude_factors.push_back([ax](double s) { return ax(s); });
  }
  spec.sigma = -1;
  return spec;
}

AsymptoticScan stationary_scan(const RuledChart& chart, const Vec& u, const Vec& v,
                               const std::vector<double>& rhos, double tol, double psi_inner) {
  std::vector<double> lambdas;
  for (double rho : rhos) lambdas.push_back(2.0 * std::numbers::pi * rho);
  return asymptotic_error_scan(ruled_inner_integral(chart, u, v, psi_inner), lambdas, tol);
}

ProductRuleReport product_rule_check(std::shared_ptr<const FourierMeasure> first,
                                     std::shared_ptr<const FourierMeasure> second, int grid,
                                     int rho_min_exp, int rho_max_exp, double slope_tol) {
  ProductMeasure product(first, second);
  ProductRuleReport rep;
  const auto rhos = dyadic_rhos(rho_min_exp, rho_max_exp);
  const int n1 = first->ambient_dim();
  const Vec eta1 = first->reference_direction();
  Vec eta = Vec::Zero(product.ambient_dim());
  eta.head(n1) = eta1;

  // Along (xi1, 0) the product transform is the first transform times mass(T).
  const auto surface = product.as_surface();
  std::vector<DecaySample> axis, factor_axis;
  for (double rho : rhos) {
    const std::complex<double> direct =
        surface ? surface->fourier(rho * eta) : product.fourier(rho * eta);
    const std::complex<double> f1 = first->fourier(rho * eta1);
    const std::complex<double> expected = f1 * second->mass();
    const double scale = std::max(std::abs(direct), std::abs(expected));
    if (scale > 0.0)
      rep.factorization_error = std::max(rep.factorization_error, std::abs(direct - expected) / scale);
    axis.push_back({rho, direct, 0.0});
    factor_axis.push_back({rho, f1, 0.0});
  }
  rep.axis_fit = fit_decay(axis, product.mass());
  rep.factor_axis_fit = fit_decay(factor_axis, first->mass());
  rep.axis_ok = std::abs(rep.axis_fit.slope - rep.factor_axis_fit.slope) <= slope_tol &&
                rep.factorization_error <= 1e-10;

  const auto scan = direction_scan(product, sphere_directions(product.ambient_dim(), grid), rhos);
  rep.summary_slope = scan.summary_slope;
  const FourierMeasure* factors[2] = {first.get(), second.get()};
  for (int i = 0; i < 2; ++i) {
    const int n = factors[i]->ambient_dim();
    if (n >= 2) {
      rep.factor_summary_slopes[i] =
          direction_scan(*factors[i], sphere_directions(n, grid), rhos).summary_slope;
    } else {
      // On the line the only directions are +-1.
      Vec d(1);
      d[0] = 1.0;
      rep.factor_summary_slopes[i] = direction_scan(*factors[i], {d, -d}, rhos).summary_slope;
    }
  }
  const double expected = std::max(rep.factor_summary_slopes[0], rep.factor_summary_slopes[1]);
  rep.scan_ok = std::abs(rep.summary_slope - expected) <= slope_tol;
  rep.pass = rep.axis_ok && rep.scan_ok;
  return rep;
}

}  // namespace fdm
