#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fdim/types.hpp"

namespace fdm {

struct MorseOptions {
  double initial_half_width = 0.5;
  double min_half_width = 1e-4;
  double reconstruction_tol = 1e-8;
  int check_points_per_axis = 9;
  // Optional box where f may be evaluated; the validity box is clipped to it.
  Box domain;
};

// tau with f(z0 + x) - f(z0) = Q_{m,n}(tau(x)) on the validity box |x_i| <= half_width,
// Q_{m,n}(y) = sum_{j<m} y_j^2 - sum_{j>=m} y_j^2.
class MorseNormalization {
 public:
  using ScalarFn = std::function<double(const Vec&)>;
  using HessianFn = std::function<Mat(const Vec&)>;

  int n() const { return n_; }
  int m() const { return m_; }
  const Vec& z0() const { return z0_; }
  double half_width() const { return half_width_; }
  double max_reconstruction_error() const { return max_reconstruction_error_; }
  // max | Jtau(0)^T dQ Jtau(0) - hessian f(z0) |
  double identity_residual() const { return identity_residual_; }

  // Coordinates are relative to z0. tau() throws ConfigError outside the box
  // where the square-root substitution is defined.
  Vec tau(const Vec& x) const;
  Mat jacobian(const Vec& x) const;
  Mat jacobian_at_origin() const;
  double q(const Vec& y) const;

  friend MorseNormalization morse_normalize(ScalarFn f, HessianFn hessian, const Vec& z0,
                                            const MorseOptions& options);

 private:
  bool tau_impl(const Vec& x, const Mat& M, Vec& out) const;
  Mat coefficients(const Vec& x) const;

  ScalarFn f_;
  HessianFn hessian_;
  Vec z0_;
  int n_ = 0;
  int m_ = 0;
  std::vector<Mat> rotations_;
  std::vector<double> pivot_signs_;
  std::vector<int> order_;  // output slot -> elimination step
  Mat m0_;
  double half_width_ = 0.0;
  double max_reconstruction_error_ = 0.0;
  double identity_residual_ = 0.0;
};

// Throws DegenerateCritical if |det hessian f(z0)| < 1e-9 and ValidityCollapse
// if no box of half-width >= min_half_width passes the checks.
MorseNormalization morse_normalize(MorseNormalization::ScalarFn f,
                                   MorseNormalization::HessianFn hessian, const Vec& z0,
                                   const MorseOptions& options = {});

struct MorsePhase {
  std::string name;
  MorseNormalization::ScalarFn f;
  MorseNormalization::HessianFn hessian;
  Vec z0;
};

// x1^2 - x2^2, x^2 + x^3 and the helix phase (t - s)^3 + 3 v (t - s)^2 at (t, v) = (0, 1).
std::vector<MorsePhase> morse_examples();

}  // namespace fdm
