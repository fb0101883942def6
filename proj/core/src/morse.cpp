#include "fdim/morse.hpp"

#include <algorithm>
#include <cmath>

#include "fdim/errors.hpp"
#include "fdim/geometry.hpp"
#include "fdim/quadrature.hpp"

namespace fdm {

namespace {

// Eigenvectors of a symmetric block, columns matched to the coordinate axes
// they overlap most, with positive diagonal; a diagonal block gives I.
Mat aligned_eigenvectors(const Mat& R) {
  const int s = static_cast<int>(R.rows());
  const Mat off = R - Mat(R.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, R.cwiseAbs().maxCoeff()))
    return Mat::Identity(s, s);
  Eigen::SelfAdjointEigenSolver<Mat> es(R);
  const Mat V = es.eigenvectors();
  Mat O(s, s);
  std::vector<bool> used(s, false);
  for (int i = 0; i < s; ++i) {
    int best = -1;
    for (int c = 0; c < s; ++c)
      if (!used[c] && (best < 0 || std::abs(V(i, c)) > std::abs(V(i, best)))) best = c;
    used[best] = true;
    O.col(i) = V(i, best) < 0.0 ? Vec(-V.col(best)) : Vec(V.col(best));
  }
  return O;
}

}  // namespace

Mat MorseNormalization::coefficients(const Vec& x) const {
  // f(z0 + x) - f(z0) = x^T A(x) x with A(x) = int_0^1 (1 - s) hess f(z0 + s x) ds.
  const Rule1D& gl = gauss_legendre(16);
  Mat A = Mat::Zero(n_, n_);
  for (std::size_t q = 0; q < gl.size(); ++q) {
    const double s = 0.5 * (1.0 + gl.nodes[q]);
    const double w = 0.5 * gl.weights[q] * (1.0 - s);
    A += w * hessian_(z0_ + s * x);
  }
  return 0.5 * (A + A.transpose());
}

bool MorseNormalization::tau_impl(const Vec& x, const Mat& M, Vec& out) const {
  Vec y = x;
  Mat R = M;
  Vec z(n_);
  for (int r = 0; r < n_; ++r) {
    const int s = n_ - r;
    const Mat& O = rotations_[r];
    R = (O.transpose() * R * O).eval();
    y = (O.transpose() * y).eval();
    const double piv = R(0, 0);
    if (!(piv * pivot_signs_[r] > 0.0)) return false;
    double lin = y[0];
    for (int j = 1; j < s; ++j) lin += R(0, j) * y[j] / piv;
    z[r] = std::sqrt(std::abs(piv)) * lin;
    if (s > 1) {
      Mat next = R.bottomRightCorner(s - 1, s - 1);
      next -= R.col(0).tail(s - 1) * R.row(0).tail(s - 1) / piv;
      R = next;
      y = Vec(y.tail(s - 1));
    }
  }
  out.resize(n_);
  for (int i = 0; i < n_; ++i) out[i] = z[order_[i]];
  return true;
}

Vec MorseNormalization::tau(const Vec& x) const {
  Vec out;
  if (!tau_impl(x, coefficients(x), out))
    throw ConfigError("point lies outside the region where the normal form is defined");
  return out;
}

Mat MorseNormalization::jacobian_at_origin() const {
  // tau is linear in x once the coefficients are frozen at A(0).
  Mat J(n_, n_);
  for (int j = 0; j < n_; ++j) {
    Vec e = Vec::Zero(n_), col;
    e[j] = 1.0;
    tau_impl(e, m0_, col);
    J.col(j) = col;
  }
  return J;
}

Mat MorseNormalization::jacobian(const Vec& x) const {
  if (x.norm() == 0.0) return jacobian_at_origin();
  const double h = 1e-6;
  Mat J(n_, n_);
  for (int j = 0; j < n_; ++j) {
    Vec a = x, b = x;
    a[j] += h;
    b[j] -= h;
    J.col(j) = (tau(a) - tau(b)) / (2.0 * h);
  }
  return J;
}

double MorseNormalization::q(const Vec& y) const {
  double v = 0.0;
  for (int j = 0; j < n_; ++j) v += (j < m_ ? 1.0 : -1.0) * y[j] * y[j];
  return v;
}

MorseNormalization morse_normalize(MorseNormalization::ScalarFn f,
                                   MorseNormalization::HessianFn hessian, const Vec& z0,
                                   const MorseOptions& options) {
  MorseNormalization mn;
  mn.f_ = std::move(f);
  mn.hessian_ = std::move(hessian);
  mn.z0_ = z0;
  mn.n_ = static_cast<int>(z0.size());
  const int n = mn.n_;
  if (n < 1 || n > 3) throw ConfigError("Morse normalization supports dimensions 1 to 3");

  Mat H0 = mn.hessian_(z0);
  H0 = 0.5 * (H0 + H0.transpose());
  if (std::abs(H0.determinant()) < 1e-9)
    throw DegenerateCritical("hessian determinant vanishes at the critical point");

  mn.m0_ = mn.coefficients(Vec::Zero(n));
  Mat R = mn.m0_;
  for (int r = 0; r < n; ++r) {
    const int s = n - r;
    const Mat O = aligned_eigenvectors(R);
    mn.rotations_.push_back(O);
    R = (O.transpose() * R * O).eval();
    mn.pivot_signs_.push_back(R(0, 0) > 0.0 ? 1.0 : -1.0);
    if (s > 1) {
      Mat next = R.bottomRightCorner(s - 1, s - 1);
      next -= R.col(0).tail(s - 1) * R.row(0).tail(s - 1) / R(0, 0);
      R = next;
    }
  }
  for (int r = 0; r < n; ++r)
    if (mn.pivot_signs_[r] > 0.0) mn.order_.push_back(r);
  mn.m_ = static_cast<int>(mn.order_.size());
  for (int r = 0; r < n; ++r)
    if (mn.pivot_signs_[r] < 0.0) mn.order_.push_back(r);

  const Mat J0 = mn.jacobian_at_origin();
  Mat dQ = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) dQ(j, j) = j < mn.m_ ? 2.0 : -2.0;
  mn.identity_residual_ = (J0.transpose() * dQ * J0 - H0).cwiseAbs().maxCoeff();
  const double det0 = J0.determinant();

  double h = options.initial_half_width;
  if (options.domain.dim() == n)
    for (int a = 0; a < n; ++a)
      h = std::min({h, z0[a] - options.domain.axes[a].lo, options.domain.axes[a].hi - z0[a]});
  const double f0 = mn.f_(z0);
  while (h >= options.min_half_width) {
    Box box;
    for (int a = 0; a < n; ++a) box.axes.push_back({-h, h});
    bool ok = true;
    double worst = 0.0;
    for (const Vec& x : box_grid(box, options.check_points_per_axis)) {
      Vec t;
      if (!mn.tau_impl(x, mn.coefficients(x), t)) {
        ok = false;
        break;
      }
      const double err = std::abs(mn.f_(z0 + x) - f0 - mn.q(t));
      worst = std::max(worst, err);
      if (err >= options.reconstruction_tol) {
        ok = false;
        break;
      }
      const double det = mn.jacobian(x).determinant();
      if (!(det * det0 > 0.0)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      mn.half_width_ = h;
      mn.max_reconstruction_error_ = worst;
      return mn;
    }
    h *= 0.5;
  }
  throw ValidityCollapse("Morse normalization validity box shrank below the minimum half-width");
}

std::vector<MorsePhase> morse_examples() {
  std::vector<MorsePhase> out;
  {
    MorsePhase p;
    p.name = "saddle";
    p.f = [](const Vec& x) { return x[0] * x[0] - x[1] * x[1]; };
    p.hessian = [](const Vec&) {
      Mat H = Mat::Zero(2, 2);
      H(0, 0) = 2.0;
      H(1, 1) = -2.0;
      return H;
    };
    p.z0 = Vec::Zero(2);
    out.push_back(p);
  }
  {
    MorsePhase p;
    p.name = "cubic";
    p.f = [](const Vec& x) { return x[0] * x[0] + x[0] * x[0] * x[0]; };
    p.hessian = [](const Vec& x) {
      Mat H(1, 1);
      H(0, 0) = 2.0 + 6.0 * x[0];
      return H;
    };
    p.z0 = Vec::Zero(1);
    out.push_back(p);
  }
  {
    // t = 0, v = 1
    MorsePhase p;
    p.name = "helix";
    p.f = [](const Vec& s) {
      const double d = -s[0];
      return d * d * d + 3.0 * d * d;
    };
    p.hessian = [](const Vec& s) {
      Mat H(1, 1);
      H(0, 0) = 6.0 * (-s[0]) + 6.0;
      return H;
    };
    p.z0 = Vec::Zero(1);
    out.push_back(p);
  }
  return out;
}

}  // namespace fdm
