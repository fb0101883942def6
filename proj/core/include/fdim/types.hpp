#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace fdm {

inline constexpr int kMaxDim = 4;

// Small fixed-capacity vectors and matrices; no heap traffic in inner loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Second partials of a vector-valued map of up to 3 parameters:
// entry(i, j) is d^2 F / dp_i dp_j.
struct SecondPartials {
  int dim = 0;
  std::array<Vec, 9> entries;

  SecondPartials() = default;
  SecondPartials(int d, int out_dim) : dim(d) {
    for (auto& e : entries) e = Vec::Zero(out_dim);
  }
  Vec& operator()(int i, int j) { return entries[i * 3 + j]; }
  const Vec& operator()(int i, int j) const { return entries[i * 3 + j]; }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct Box {
  std::vector<Interval> axes;

  Box() = default;
  explicit Box(std::vector<Interval> a) : axes(std::move(a)) {}
  int dim() const { return static_cast<int>(axes.size()); }
  Vec center() const {
    Vec c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = axes[i].center();
    return c;
  }
  bool contains(const Vec& p, double slack = 0.0) const {
    if (p.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (p[i] < axes[i].lo - slack || p[i] > axes[i].hi + slack) return false;
    return true;
  }
  // Cartesian product, this box first.
  Box times(const Box& other) const {
    Box b = *this;
    b.axes.insert(b.axes.end(), other.axes.begin(), other.axes.end());
    return b;
  }
};

}  // namespace fdm
