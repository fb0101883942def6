#include "fdim/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "fdim/errors.hpp"
#include "fdim/quadrature.hpp"

namespace fdm {

double OscillatorySpec::amplitude_at(const Vec& z) const {
  double a = 1.0;
  for (std::size_t i = 0; i < amplitude_factors.size(); ++i)
    if (amplitude_factors[i]) a *= amplitude_factors[i](z[static_cast<int>(i)]);
  if (a == 0.0) return 0.0;
  if (phase_and_amplitude) {
    double ph = 0.0, am = 1.0;
    phase_and_amplitude(z, ph, am);
    a *= am;
  } else if (amplitude) {
    a *= amplitude(z);
  }
  return a;
}

Vec OscillatorySpec::gradient_at(const Vec& z) const {
  if (gradient) return gradient(z);
  const double h = 1e-5;
  Vec g(z.size());
  for (int i = 0; i < z.size(); ++i) {
    Vec a = z, b = z;
    a[i] += h;
    b[i] -= h;
    g[i] = (phase(a) - phase(b)) / (2.0 * h);
  }
  return g;
}

Mat OscillatorySpec::hessian_at(const Vec& z) const {
  if (hessian) return hessian(z);
  const double h = 1e-5;
  const int n = static_cast<int>(z.size());
  Mat H(n, n);
  for (int j = 0; j < n; ++j) {
    Vec a = z, b = z;
    a[j] += h;
    b[j] -= h;
    H.col(j) = (gradient_at(a) - gradient_at(b)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

std::vector<GradedAxis> panel_plan(const OscillatorySpec& spec) {
  const int n = spec.dim();
  static constexpr int kSamples[] = {2, 33, 17, 9};
  const int S = kSamples[std::min(n, 3)];
  std::vector<std::vector<double>> rate(n, std::vector<double>(S, 0.0));
  const bool fixed = static_cast<int>(spec.gradient_bound.size()) == n;
  if (fixed) {
    for (int a = 0; a < n; ++a) std::fill(rate[a].begin(), rate[a].end(), spec.gradient_bound[a]);
  }
  if (!fixed || spec.local_bandwidth) {
    long long total = 1;
    for (int a = 0; a < n; ++a) total *= S;
    Vec z(n);
    std::vector<int> idx(n);
    for (long long flat = 0; flat < total; ++flat) {
      long long rest = flat;
      for (int a = 0; a < n; ++a) {
        idx[a] = static_cast<int>(rest % S);
        rest /= S;
        const Interval& ax = spec.box.axes[a];
        z[a] = ax.lo + ax.length() * idx[a] / (S - 1);
      }
      Vec r = Vec::Zero(n);
      if (!fixed) r = spec.gradient_at(z).cwiseAbs();
      if (spec.local_bandwidth) r += spec.local_bandwidth(z).cwiseAbs();
      for (int a = 0; a < n; ++a) rate[a][idx[a]] = std::max(rate[a][idx[a]], r[a]);
    }
  }

  std::vector<GradedAxis> plan(n);
  for (int a = 0; a < n; ++a) {
    const Interval& ax = spec.box.axes[a];
    const double L = ax.length();
    double extra = a < static_cast<int>(spec.amplitude_bandwidth.size()) ? spec.amplitude_bandwidth[a] : 0.0;
    GradedAxis& g = plan[a];
    double peak = 0.0;
    std::vector<double> cell_rate(S - 1);
    for (int i = 0; i + 1 < S; ++i) {
      // Neighbouring samples guard against a maximum between grid points.
      double m = 0.0;
      for (int j = std::max(0, i - 1); j <= std::min(S - 1, i + 2); ++j) m = std::max(m, rate[a][j]);
      cell_rate[i] = m + extra;
      peak = std::max(peak, cell_rate[i]);
      g.cells.push_back(ax.lo + L * i / (S - 1));
    }
    g.cells.push_back(ax.hi);
    for (double r : cell_rate) g.density.push_back(peak > 0.0 ? r + 0.1 * peak : 1.0);

    g.edges.push_back(ax.lo);
    std::vector<double> bp = a < static_cast<int>(spec.breakpoints.size()) ? spec.breakpoints[a]
                                                                         : std::vector<double>{};
    std::sort(bp.begin(), bp.end());
    const double eps = 1e-12 * std::max(1.0, L);
    for (double b : bp)
      if (b > g.edges.back() + eps && b < ax.hi - eps) g.edges.push_back(b);
    g.edges.push_back(ax.hi);

    const double scale = kNodesPerWavelength * spec.lambda / kPanelOrder;
    long long total = 0;
    for (std::size_t s = 0; s + 1 < g.edges.size(); ++s) {
      double w = 0.0;
      for (int i = 0; i + 1 < S; ++i) {
        const double lo = std::max(g.edges[s], g.cells[i]), hi = std::min(g.edges[s + 1], g.cells[i + 1]);
        if (hi > lo) w += cell_rate[i] * (hi - lo);
      }
      const int p = std::max(1, static_cast<int>(std::min(std::ceil(scale * w), 1e9)));
      g.panels.push_back(p);
      total += p;
    }
    if (total < 4) {
      for (std::size_t s = 0; s + 1 < g.edges.size(); ++s) {
        const int p = static_cast<int>(std::ceil(4.0 * (g.edges[s + 1] - g.edges[s]) / L - 1e-9));
        g.panels[s] = std::max(g.panels[s], p);
      }
    }
  }
  return plan;
}

std::vector<int> base_panels(const OscillatorySpec& spec) {
  std::vector<int> out;
  for (const GradedAxis& g : panel_plan(spec)) out.push_back(static_cast<int>(g.total_panels(0)));
  return out;
}

namespace {

struct LevelSum {
  CompensatedSum re, im, mass;
};

}  // namespace

QuadratureResult integrate(const OscillatorySpec& spec, double tol, const IntegrateOptions& options) {
  const int n = spec.dim();
  if (n < 1 || n > 3) throw ConfigError("integrate supports dimensions 1 to 3");
  if (!spec.phase && !spec.phase_and_amplitude) throw ConfigError("oscillatory spec has no phase");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  const std::vector<GradedAxis> plan = panel_plan(spec);
  const double lambda = spec.lambda;
  const double sigma = spec.sigma >= 0 ? 1.0 : -1.0;

  // When the base rule is fine enough, its error is estimated against the rule
  // with half as many panels instead of against a doubled rule.
  const bool halve = std::all_of(plan.begin(), plan.end(),
                                 [](const GradedAxis& g) { return g.total_panels(0) >= 8; });
  std::complex<double> prev, older;
  bool have_prev = false;
  QuadratureResult out;
  for (int level = halve ? -1 : 0; level <= options.max_doublings; ++level) {
    std::vector<Rule1D> rules(n);
    double nodes = 1.0;
    long long panel_total = 1;
    for (int a = 0; a < n; ++a) {
      rules[a] = plan[a].rule(level);
      nodes *= static_cast<double>(rules[a].size());
      panel_total *= plan[a].total_panels(level);
    }
    if (nodes > static_cast<double>(options.max_nodes))
      throw QuadratureNotConverged("oscillatory quadrature exceeded its node budget", older, prev);

    // Fold per-axis amplitude factors into the weights.
    for (int a = 0; a < n; ++a) {
      if (a >= static_cast<int>(spec.amplitude_factors.size()) || !spec.amplitude_factors[a]) continue;
      for (std::size_t i = 0; i < rules[a].size(); ++i)
        rules[a].weights[i] *= spec.amplitude_factors[a](rules[a].nodes[i]);
    }

    LevelSum sum;
    Vec z(n);
    auto node = [&](double w) {
      double ph = 0.0, amp = 1.0;
      if (spec.phase_and_amplitude) {
        spec.phase_and_amplitude(z, ph, amp);
      } else {
        ph = spec.phase(z);
        if (spec.amplitude) amp = spec.amplitude(z);
      }
      const double wa = w * amp;
      if (wa == 0.0) return;
      const double th = lambda * ph;
      sum.re.add(wa * std::cos(th));
      sum.im.add(sigma * wa * std::sin(th));
      sum.mass.add(std::abs(wa));
    };
    const Rule1D& r0 = rules[0];
    for (std::size_t i = 0; i < r0.size(); ++i) {
      const double w0 = r0.weights[i];
      if (w0 == 0.0) continue;
      z[0] = r0.nodes[i];
      if (n == 1) {
        node(w0);
        continue;
      }
      const Rule1D& r1 = rules[1];
      for (std::size_t j = 0; j < r1.size(); ++j) {
        const double w1 = w0 * r1.weights[j];
        if (w1 == 0.0) continue;
        z[1] = r1.nodes[j];
        if (n == 2) {
          node(w1);
          continue;
        }
        const Rule1D& r2 = rules[2];
        for (std::size_t k = 0; k < r2.size(); ++k) {
          const double w2 = w1 * r2.weights[k];
          if (w2 == 0.0) continue;
          z[2] = r2.nodes[k];
          node(w2);
        }
      }
    }
    const std::complex<double> val(sum.re.value(), sum.im.value());
    out.value = val;
    out.abs_mass = sum.mass.value();
    out.nodes += static_cast<long long>(nodes);
    out.panels_used = panel_total;
    if (have_prev) {
      const double diff = std::abs(val - prev);
      if (diff <= std::max(tol * std::abs(val), options.floor_relative * std::max(out.abs_mass, spec.mass_scale))) {
        out.error_estimate = diff;
        out.converged = true;
        return out;
      }
    }
    older = prev;
    prev = val;
    have_prev = true;
  }
  throw QuadratureNotConverged("oscillatory quadrature did not converge after panel doubling",
                               older, prev);
}

std::complex<double> StationaryPointReport::leading_term(double lambda, int sigma) const {
  return stationary_phase_leading(*this, amplitude, lambda, sigma);
}

std::complex<double> stationary_phase_leading(const StationaryPointReport& report, double psi_at_z0,
                                              double lambda, int sigma) {
  if (!report.nondegenerate)
    throw DegenerateCritical("stationary phase needs a nondegenerate critical point");
  const double s = sigma >= 0 ? 1.0 : -1.0;
  const int n = report.n;
  const double mag = std::pow(2.0 * std::numbers::pi / lambda, 0.5 * n) /
                     std::sqrt(std::abs(report.det)) * psi_at_z0;
  const double arg = s * (lambda * report.phase_value +
                          std::numbers::pi * (2.0 * report.signature_m - n) / 4.0);
  return mag * std::polar(1.0, arg);
}

namespace {

StationaryPointReport describe_point(const OscillatorySpec& spec, const Vec& z) {
  StationaryPointReport r;
  r.z0 = z;
  r.n = static_cast<int>(z.size());
  r.phase_value = spec.phase ? spec.phase(z) : 0.0;
  if (!spec.phase) {
    double ph = 0.0, am = 0.0;
    spec.phase_and_amplitude(z, ph, am);
    r.phase_value = ph;
  }
  r.hessian = spec.hessian_at(z);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(r.hessian),
                                                    Eigen::EigenvaluesOnly);
  r.det = 1.0;
  for (int i = 0; i < r.n; ++i) {
    const double ev = es.eigenvalues()[i];
    r.eigenvalues.push_back(ev);
    r.det *= ev;
    if (ev > 0.0) ++r.signature_m;
  }
  r.nondegenerate = std::abs(r.det) > kDegenerateDet;
  r.amplitude = spec.amplitude_at(z);
  return r;
}

}  // namespace

CriticalPointSearch find_critical_points(const OscillatorySpec& spec, int seeds_per_axis) {
  const int n = spec.dim();
  if (n < 1 || n > 3) throw ConfigError("critical point search supports dimensions 1 to 3");
  CriticalPointSearch out;
  const double slack = 1e-12;
  int total = 1;
  for (int a = 0; a < n; ++a) total *= seeds_per_axis;
  for (int idx = 0; idx < total; ++idx) {
    Vec z(n);
    int rest = idx;
    for (int a = 0; a < n; ++a) {
      const auto& ax = spec.box.axes[a];
      z[a] = ax.lo + ax.length() * ((rest % seeds_per_axis) + 0.5) / seeds_per_axis;
      rest /= seeds_per_axis;
    }
    ++out.seeds;
    bool converged = false, left = false;
    Vec g = spec.gradient_at(z);
    // After |grad| < 1e-12 Newton keeps polishing until the step is negligible,
    // so that a degenerate zero is located closely enough for its determinant to vanish.
    int polish = 0;
    for (int it = 0; it < 100 + polish; ++it) {
      const double gn = g.norm();
      if (gn == 0.0) {
        converged = true;
        break;
      }
      if (!converged && gn < 1e-12) {
        converged = true;
        polish = 100;
      }
      const Mat H = spec.hessian_at(z);
      Eigen::FullPivLU<Mat> lu(H);
      if (!lu.isInvertible()) break;
      const Vec step = -lu.solve(g);
      if (converged && step.norm() < 1e-15 * (1.0 + z.norm())) break;
      double t = 1.0;
      bool accepted = false;
      while (t > 1e-10) {
        const Vec trial = z + t * step;
        if (!spec.box.contains(trial, slack)) {
          t *= 0.5;
          continue;
        }
        const Vec gt = spec.gradient_at(trial);
        if (gt.norm() < gn) {
          z = trial;
          g = gt;
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        if (!converged) left = !spec.box.contains(z + step, slack);
        break;
      }
    }
    if (!converged) {
      if (!left) ++out.stalled;
      continue;
    }
    bool dup = false;
    for (const auto& p : out.points)
      if ((p.z0 - z).norm() < 1e-8) dup = true;
    if (dup) continue;
    if (!(spec.amplitude_at(z) > 0.0)) continue;
    out.points.push_back(describe_point(spec, z));
  }
  return out;
}

AsymptoticScan asymptotic_error_scan(OscillatorySpec spec, const std::vector<double>& lambdas,
                                     double tol) {
  AsymptoticScan scan;
  scan.points = find_critical_points(spec).points;
  for (const auto& p : scan.points)
    if (!p.nondegenerate)
      throw DegenerateCritical("phase has a degenerate critical point inside the support");
  const int n = spec.dim();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double lambda : lambdas) {
    spec.lambda = lambda;
    const QuadratureResult q = integrate(spec, tol);
    ScanRow row;
    row.lambda = lambda;
    row.value = q.value;
    row.error_estimate = q.error_estimate;
    for (const auto& p : scan.points) row.leading += p.leading_term(lambda, spec.sigma);
    row.scaled_error = std::abs(row.value - row.leading) * std::pow(lambda, 0.5 * (n + 1));
    lo = std::min(lo, row.scaled_error);
    hi = std::max(hi, row.scaled_error);
    scan.rows.push_back(row);
  }
  scan.ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return scan;
}

OscillatorySpec ruled_phase_spec(const RuledChart& chart, const Vec& u, const Vec& v,
                                 bool reference_normal, const Box& box) {
  if (chart.base_dim < 1) throw ConfigError("ruled phase needs a base of dimension >= 1");
  const Vec P = chart.eval(u, v);
  const int k = chart.base_dim;
  OscillatorySpec spec;
  spec.box = box;
  if (reference_normal && chart.reference_normal) {
    const JetFn nfn = chart.reference_normal;
    const JetFn afn = chart.alpha;
    spec.phase = [P, nfn, afn](const Vec& s) { return (P - afn(s).value).dot(nfn(s).value); };
    spec.gradient = [P, nfn, afn, k](const Vec& s) {
      const Jet a = afn(s), nn = nfn(s);
      Vec g(k);
      for (int j = 0; j < k; ++j)
        g[j] = -a.d1.col(j).dot(nn.value) + (P - a.value).dot(nn.d1.col(j));
      return g;
    };
    spec.hessian = [P, nfn, afn, k](const Vec& s) {
      const Jet a = afn(s), nn = nfn(s);
      Mat H(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          H(i, j) = -a.d2(i, j).dot(nn.value) - a.d1.col(i).dot(nn.d1.col(j)) -
                    a.d1.col(j).dot(nn.d1.col(i)) + (P - a.value).dot(nn.d2(i, j));
      return H;
    };
  } else {
    auto rc = std::make_shared<const RuledChart>(chart);
    spec.phase = [P, rc](const Vec& s) {
      return (P - rc->alpha(s).value).dot(base_normal_jet(*rc, s).normal);
    };
    spec.gradient = [P, rc, k](const Vec& s) {
      const Jet a = rc->alpha(s);
      const NormalJet nj = base_normal_jet(*rc, s);
      Vec g(k);
      for (int j = 0; j < k; ++j)
        g[j] = -a.d1.col(j).dot(nj.normal) + (P - a.value).dot(nj.d_normal.col(j));
      return g;
    };
  }
  return spec;
}

}  // namespace fdm
