#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fdim/catalog.hpp"
#include "fdim/measure.hpp"

namespace fdm {

struct DecaySample {
  double rho = 0.0;
  std::complex<double> value;
  double error_estimate = 0.0;
  bool skipped = false;  // not evaluated, counted as floored
};

// Least-squares fit of log2|value| against log2 rho on samples above the floor
// 1e-13 * mass. With fewer than two such samples the slope is the secant to the
// floor, an upper bound rather than an estimate.
struct DecayFit {
  std::vector<DecaySample> samples;
  std::vector<bool> floored;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  bool floor_hit = false;
  bool slope_is_bound = false;
  bool all_floored = false;
};

inline constexpr double kFloorRelative = 1e-13;
inline constexpr int kMinDecaySamples = 5;

DecayFit fit_decay(const std::vector<DecaySample>& samples, double mass);

std::vector<double> dyadic_rhos(int min_exp, int max_exp);

// Fibonacci-type direction sets on S^1, S^2, S^3 that contain both poles +-e_{d+1}.
std::vector<Vec> sphere_directions(int ambient_dim, int count);

struct DirectionFit {
  Vec direction;
  DecayFit fit;
};

struct DirectionScan {
  std::vector<DirectionFit> fits;
  double summary_slope = 0.0;  // algebraic maximum over the grid (slowest decay)
  int summary_index = -1;
};

// With stop_after > 0, samples after that many consecutive floored values are
// skipped: past the floor the transform carries no information for the fit.
std::vector<DecaySample> sample_along(const FourierMeasure& measure, const Vec& direction,
                                      const std::vector<double>& rhos, int stop_after = 0);
DirectionScan direction_scan(const FourierMeasure& measure, const std::vector<Vec>& directions,
                             const std::vector<double>& rhos);

struct CertificateParams {
  int rho_min_exp = 4;
  int rho_max_exp = 12;
  int grid = 64;
  double slope_tol = 0.05;
  double flat_tol = 0.01;
  double transfer_tol = 1e-9;
  double outer_tol = 1e-8;
  // Density radii as fractions of the half-width; unset means the catalog entry's.
  std::optional<double> inner_fraction;
  std::optional<double> outer_fraction;
  int rank_grid = 5;
  bool mu_scan = true;
};

struct TransferCheck {
  double rho = 0.0;
  double nu_abs = 0.0;
  double bound = 0.0;  // ||psi||_1 max_s |mu^(rho N(s))|
  bool holds = false;
};

struct DimensionCertificate {
  std::string surface;
  std::string mode;  // "flat", "full-rank" or "ruled"
  int k = 0;
  int d = 0;
  Vec upper_direction;
  DecayFit nu_fit;
  DirectionScan mu_scan;
  double mu_best_slope = 0.0;
  std::vector<TransferCheck> transfer;
  bool transfer_ok = true;
  ConstancyReport constancy;
  double dimension_lo = 0.0;
  double dimension_hi = 0.0;
  double slope_tol = 0.0;
  bool pass = false;
  std::string reason;
};

// Checks the rank annotation, then brackets the decay exponent: ruled surfaces
// through the averaged measure, flat and full-rank ones through mu^ along the normal.
DimensionCertificate certificate(const SurfaceEntry& surface, const CertificateParams& params = {});

struct ProductRuleReport {
  double factorization_error = 0.0;  // max relative error along (xi1, 0)
  DecayFit axis_fit;
  DecayFit factor_axis_fit;
  bool axis_ok = false;
  double summary_slope = 0.0;
  double factor_summary_slopes[2] = {0.0, 0.0};
  bool scan_ok = false;
  bool pass = false;
};

// s -> exp(-2 pi i rho phi(s)) psi(s) with phi(s) = (Phi(u, v) - alpha(s)) . n(s), n the
// reference normal when the chart has one, psi a bump of the given inner radius
// centred at u. lambda = 2 pi rho is filled in by the scan.
OscillatorySpec ruled_inner_integral(const RuledChart& chart, const Vec& u, const Vec& v,
                                     double psi_inner = 0.25);
AsymptoticScan stationary_scan(const RuledChart& chart, const Vec& u, const Vec& v,
                               const std::vector<double>& rhos, double tol = 1e-12,
                               double psi_inner = 0.25);

ProductRuleReport product_rule_check(std::shared_ptr<const FourierMeasure> first,
                                     std::shared_ptr<const FourierMeasure> second, int grid,
                                     int rho_min_exp, int rho_max_exp, double slope_tol = 0.05);

}  // namespace fdm
