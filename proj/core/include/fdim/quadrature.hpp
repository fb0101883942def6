#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "fdim/types.hpp"

namespace fdm {

// Nodes and weights of a rule on a fixed interval.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1] (cached).
const Rule1D& gauss_legendre(int n);

inline constexpr int kPanelOrder = 16;

// Composite Gauss-Legendre on iv with at least `panels` panels. Interior
// breakpoints split the interval first; every segment gets at least one panel
// and the rest are shared in proportion to segment length.
Rule1D composite_gauss(const Interval& iv, const std::vector<double>& breakpoints, int panels,
                       int order = kPanelOrder);

// Composite rule on one axis whose panels equidistribute a piecewise-constant
// density. Segment edges (interval ends and breakpoints) are always panel edges.
struct GradedAxis {
  std::vector<double> edges;
  std::vector<int> panels;       // per segment at level 0
  std::vector<double> cells;     // density cell edges covering the interval
  std::vector<double> density;   // per cell, positive
  // Level l uses panels << l per segment; level -1 halves them (at least one).
  int panel_count(int segment, int level) const;
  long long total_panels(int level) const;
  Rule1D rule(int level, int order = kPanelOrder) const;
};

// Compensated (Neumaier) summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct SmoothQuadrature {
  std::complex<double> value;
  double error_estimate = 0.0;
  long long nodes = 0;
  bool converged = false;
};

using ComplexFn = std::function<std::complex<double>(const Vec&)>;

// Tensor composite Gauss-Legendre for non-oscillatory integrands on a box of
// dimension <= 3, doubling panels until successive values agree to
// max(tol * |value|, abs_tol). Throws QuadratureNotConverged.
SmoothQuadrature integrate_smooth(const ComplexFn& f, const Box& box,
                                  const std::vector<std::vector<double>>& breakpoints, double tol,
                                  double abs_tol, int initial_panels = 1, int max_doublings = 8);

// Tensor rule evaluation helper shared by the integrators.
template <class F>
void for_each_tensor_node(const std::vector<Rule1D>& rules, F&& f) {
  const int n = static_cast<int>(rules.size());
  Vec z(n);
  if (n == 0) {
    f(z, 1.0);
    return;
  }
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      z[a] = rules[a].nodes[idx[a]];
      w *= rules[a].weights[idx[a]];
    }
    f(z, w);
    int a = n - 1;
    while (a >= 0 && ++idx[a] == rules[a].size()) idx[a--] = 0;
    if (a < 0) break;
  }
}

}  // namespace fdm
