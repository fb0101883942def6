#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "fdim/geometry.hpp"
#include "fdim/quadrature.hpp"
#include "fdim/types.hpp"

namespace fdm {

// I(lambda) = integral over box of exp(i sigma lambda phi(z)) psi(z) dz, n <= 3.
struct OscillatorySpec {
  std::function<double(const Vec&)> phase;
  std::function<Vec(const Vec&)> gradient;  // optional, central differences otherwise
  std::function<Mat(const Vec&)> hessian;   // optional, differences of the gradient otherwise
  // psi = product of per-axis factors times the general factor (either may be absent).
  std::vector<std::function<double(double)>> amplitude_factors;
  std::function<double(const Vec&)> amplitude;
  // Optional fused evaluation of (phase, general amplitude factor) at a node.
  std::function<void(const Vec&, double&, double&)> phase_and_amplitude;
  Box box;  // must contain spt psi
  std::vector<std::vector<double>> breakpoints;  // per-axis panel edges
  double lambda = 1.0;
  int sigma = 1;
  // Per-axis overrides/extras for the panel rule; the bandwidth accounts for
  // amplitude oscillation and is scaled by lambda like the phase gradient.
  std::vector<double> gradient_bound;
  std::vector<double> amplitude_bandwidth;
  // Scale of |psi| for the absolute convergence floor when psi carries factors
  // that are not part of the measure itself (0: use the sum of |w psi|).
  double mass_scale = 0.0;
  // Optional pointwise per-axis amplitude rate, added to the phase gradient.
  std::function<Vec(const Vec&)> local_bandwidth;

  int dim() const { return box.dim(); }
  double amplitude_at(const Vec& z) const;
  Vec gradient_at(const Vec& z) const;
  Mat hessian_at(const Vec& z) const;
};

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  long long panels_used = 0;
  long long nodes = 0;
  bool converged = false;
  double abs_mass = 0.0;  // sum of |w psi| at the accepted level
};

inline constexpr double kNodesPerWavelength = 3.0;
inline constexpr double kMassFloor = 1e-13;

struct IntegrateOptions {
  int max_doublings = 6;
  long long max_nodes = 400'000'000;
  // Absolute acceptance threshold, relative to the mass scale.
  double floor_relative = kMassFloor;
};

// Per-axis panel layout before refinement. The local rate along axis a is
// |d_a phi| + bandwidth, maximised over a sample grid; each breakpoint segment
// gets ceil(3 lambda integral(rate) / 16) panels, at least 4 per axis.
std::vector<GradedAxis> panel_plan(const OscillatorySpec& spec);
std::vector<int> base_panels(const OscillatorySpec& spec);

QuadratureResult integrate(const OscillatorySpec& spec, double tol,
                           const IntegrateOptions& options = {});

struct StationaryPointReport {
  Vec z0;
  double phase_value = 0.0;
  Mat hessian;
  std::vector<double> eigenvalues;
  int signature_m = 0;
  int n = 0;
  double det = 0.0;
  bool nondegenerate = false;
  double amplitude = 0.0;  // psi(z0)

  std::complex<double> leading_term(double lambda, int sigma = 1) const;
};

struct CriticalPointSearch {
  std::vector<StationaryPointReport> points;
  int seeds = 0;
  int stalled = 0;
};

inline constexpr double kDegenerateDet = 1e-9;

// Grid-seeded damped Newton; keeps zeros of grad phi where psi > 0.
CriticalPointSearch find_critical_points(const OscillatorySpec& spec, int seeds_per_axis = 64);

// exp(i s lambda phi0) (2 pi / lambda)^{n/2} |det|^{-1/2} exp(i s pi (2m - n) / 4) psi(z0).
std::complex<double> stationary_phase_leading(const StationaryPointReport& report, double psi_at_z0,
                                              double lambda, int sigma = 1);

struct ScanRow {
  double lambda = 0.0;
  std::complex<double> value;
  std::complex<double> leading;
  double error_estimate = 0.0;
  double scaled_error = 0.0;  // |value - leading| * lambda^{(n+1)/2}
};

struct AsymptoticScan {
  std::vector<ScanRow> rows;
  std::vector<StationaryPointReport> points;
  double ratio = 0.0;  // max / min of the scaled error column
};

AsymptoticScan asymptotic_error_scan(OscillatorySpec spec, const std::vector<double>& lambdas,
                                     double tol);

// Phase s -> (Phi(u, v) - alpha(s)) . n(s) of a ruled chart over s in R^k, with
// n the unit normal or, when requested and available, the chart's reference normal.
OscillatorySpec ruled_phase_spec(const RuledChart& chart, const Vec& u, const Vec& v,
                                 bool reference_normal, const Box& box);

}  // namespace fdm
