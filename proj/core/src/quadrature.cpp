#include "fdim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fdim/errors.hpp"

namespace fdm {

namespace {

Rule1D compute_gauss_legendre(int n) {
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule1D> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Rule1D composite_gauss(const Interval& iv, const std::vector<double>& breakpoints, int panels,
                       int order) {
  std::vector<double> edges{iv.lo};
  std::vector<double> bp = breakpoints;
  std::sort(bp.begin(), bp.end());
  const double eps = 1e-12 * std::max(1.0, iv.length());
  for (double b : bp)
    if (b > edges.back() + eps && b < iv.hi - eps) edges.push_back(b);
  edges.push_back(iv.hi);

  const Rule1D& gl = gauss_legendre(order);
  const double L = iv.length();
  Rule1D out;
  const int segs = static_cast<int>(edges.size()) - 1;
  out.nodes.reserve(static_cast<std::size_t>(std::max(panels, segs)) * order + order * segs);
  out.weights.reserve(out.nodes.capacity());
  for (int s = 0; s < segs; ++s) {
    const double a = edges[s], b = edges[s + 1];
    const int p = std::max(1, static_cast<int>(std::ceil(panels * (b - a) / L - 1e-9)));
    const double h = (b - a) / p;
    for (int q = 0; q < p; ++q) {
      const double lo = a + q * h;
      const double half = 0.5 * h;
      const double mid = lo + half;
      for (int i = 0; i < order; ++i) {
        out.nodes.push_back(mid + half * gl.nodes[i]);
        out.weights.push_back(half * gl.weights[i]);
      }
    }
  }
  return out;
}

int GradedAxis::panel_count(int segment, int level) const {
  const int p = panels[static_cast<std::size_t>(segment)];
  return level < 0 ? std::max(1, p >> (-level)) : p << level;
}

long long GradedAxis::total_panels(int level) const {
  long long t = 0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) t += panel_count(static_cast<int>(s), level);
  return t;
}

Rule1D GradedAxis::rule(int level, int order) const {
  const Rule1D& gl = gauss_legendre(order);
  Rule1D out;
  out.nodes.reserve(static_cast<std::size_t>(total_panels(level)) * order);
  out.weights.reserve(out.nodes.capacity());
  auto panel = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo), mid = lo + half;
    for (int i = 0; i < order; ++i) {
      out.nodes.push_back(mid + half * gl.nodes[i]);
      out.weights.push_back(half * gl.weights[i]);
    }
  };
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double a = edges[s], b = edges[s + 1];
    // Cumulative density over [a, b], piecewise linear in x.
    std::vector<double> xs{a}, ws{0.0};
    for (std::size_t c = 0; c < density.size(); ++c) {
      const double lo = std::max(a, cells[c]), hi = std::min(b, cells[c + 1]);
      if (hi <= lo) continue;
      if (lo > xs.back()) {
        xs.push_back(lo);
        ws.push_back(ws.back());
      }
      xs.push_back(hi);
      ws.push_back(ws.back() + density[c] * (hi - lo));
    }
    if (xs.back() < b) {
      xs.push_back(b);
      ws.push_back(ws.back());
    }
    const int p = panel_count(static_cast<int>(s), level);
    const double total = ws.back();
    double lo = a;
    std::size_t j = 1;
    for (int q = 1; q <= p; ++q) {
      double hi = b;
      if (q < p) {
        if (total > 0.0) {
          const double target = total * q / p;
          while (j + 1 < ws.size() && ws[j] < target) ++j;
          const double dw = ws[j] - ws[j - 1];
          hi = dw > 0.0 ? xs[j - 1] + (xs[j] - xs[j - 1]) * (target - ws[j - 1]) / dw : xs[j];
        } else {
          hi = a + (b - a) * q / p;
        }
      }
      panel(lo, hi);
      lo = hi;
    }
  }
  return out;
}

SmoothQuadrature integrate_smooth(const ComplexFn& f, const Box& box,
                                  const std::vector<std::vector<double>>& breakpoints, double tol,
                                  double abs_tol, int initial_panels, int max_doublings) {
  const int n = box.dim();
  if (n > 3) throw ConfigError("integrate_smooth supports at most 3 dimensions");
  std::complex<double> prev, older;
  bool have_prev = false;
  SmoothQuadrature out;
  for (int level = 0; level <= max_doublings; ++level) {
    std::vector<Rule1D> rules;
    for (int a = 0; a < n; ++a) {
      const std::vector<double> bp =
          a < static_cast<int>(breakpoints.size()) ? breakpoints[a] : std::vector<double>{};
      rules.push_back(composite_gauss(box.axes[a], bp, initial_panels << level));
    }
    CompensatedSum re, im;
    long long count = 0;
    for_each_tensor_node(rules, [&](const Vec& z, double w) {
      const std::complex<double> v = f(z);
      re.add(w * v.real());
      im.add(w * v.imag());
      ++count;
    });
    const std::complex<double> val(re.value(), im.value());
    out.nodes += count;
    if (have_prev) {
      const double diff = std::abs(val - prev);
      if (diff <= std::max(tol * std::abs(val), abs_tol)) {
        out.value = val;
        out.error_estimate = diff;
        out.converged = true;
        return out;
      }
    }
    older = prev;
    prev = val;
    have_prev = true;
  }
  throw QuadratureNotConverged("smooth quadrature did not converge", older, prev);
}

}  // namespace fdm
