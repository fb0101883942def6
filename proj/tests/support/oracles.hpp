#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "fdim/geometry.hpp"
#include "fdim/measure.hpp"

namespace fdm::oracle {

// Brute-force composite trapezoid for integral of exp(i sigma lambda phi(s)) psi(s) over [lo, hi].
std::complex<double> trapezoid(const std::function<double(double)>& phase,
                               const std::function<double(double)>& amplitude, double lo, double hi,
                               double lambda, int sigma, long nodes = 1'000'000);

// nu^(rho e_{d+1}) from the double integral over (s, p) with the order swapped:
// no ruling spectra, no mu^ evaluations.
std::complex<double> averaged_direct(const AveragedMeasure& nu, double rho, double tol = 1e-5);

// Integral of exp(-2 pi i Phi(q) . xi) w(q) dq for a generic chart by tensor
// quadrature, with w an arbitrary density on the chart's domain.
std::complex<double> chart_transform(const Chart& chart, const std::function<double(const Vec&)>& w,
                                     const std::vector<std::vector<double>>& breakpoints,
                                     const Vec& xi, double tol = 1e-11);

// Chart q -> Phi(g(q)) on the box g^{-1}(domain), with g acting axis by axis and
// derivatives by the chain rule.
struct AxisMap {
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> d2g;
  std::function<double(double)> g_inverse;
};
Chart reparametrize(const Chart& chart, const std::vector<AxisMap>& maps);

}  // namespace fdm::oracle
