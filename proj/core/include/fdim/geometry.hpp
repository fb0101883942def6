#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fdim/types.hpp"

namespace fdm {

// Value and first/second derivatives of a map R^k -> R^{d+1}.
// d1 is (d+1) x k with column j = dF/du_j.
struct Jet {
  Vec value;
  Mat d1;
  SecondPartials d2;
};
using JetFn = std::function<Jet(const Vec&)>;

// Hypersurface patch Phi: box in R^d -> R^{d+1}.
// jacobian() returns the (d+1) x d matrix whose column j is dPhi/dp_j.
class Chart {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;
  using JacobianFn = std::function<Mat(const Vec&)>;
  using HessianFn = std::function<SecondPartials(const Vec&)>;

  static constexpr double kFdStep = 1e-5;

  Chart(int ambient_dim, Box domain, EvalFn eval, JacobianFn jacobian = {},
        HessianFn hessian = {});

  int ambient_dim() const { return ambient_dim_; }
  int param_dim() const { return ambient_dim_ - 1; }
  const Box& domain() const { return domain_; }
  bool has_analytic_derivatives() const { return bool(jacobian_) && bool(hessian_); }

  Vec eval(const Vec& p) const { return eval_(p); }
  Mat jacobian(const Vec& p) const;
  SecondPartials hessian(const Vec& p) const;

  Mat jacobian_fd(const Vec& p, double h = kFdStep) const;
  SecondPartials hessian_fd(const Vec& p, double h = kFdStep) const;

 private:
  int ambient_dim_;
  Box domain_;
  EvalFn eval_;
  JacobianFn jacobian_;
  HessianFn hessian_;
};

// Phi(u, v) = alpha(u) + sum_l v_l w_l(u), u in R^k, v in R^{d-k}.
// Parameter points are stored as p = (u, v).
struct RuledChart {
  int ambient_dim = 3;
  int base_dim = 1;
  Box u_domain;
  Box v_domain;
  JetFn alpha;
  std::vector<JetFn> rulings;
  // Optional unnormalized normal field n(u) along the base, used where
  // closed-form phase functions are written with it.
  JetFn reference_normal;

  int num_rulings() const { return static_cast<int>(rulings.size()); }
  int param_dim() const { return base_dim + num_rulings(); }
  Box domain() const { return u_domain.times(v_domain); }
  Vec split_u(const Vec& p) const { return p.head(base_dim); }
  Vec split_v(const Vec& p) const { return p.tail(num_rulings()); }
  Vec join(const Vec& u, const Vec& v) const;

  Vec eval(const Vec& u, const Vec& v) const;
  Chart chart() const;
};

// Cofactor normal of d vectors in R^{d+1}; for d = 2 this is the cross product.
Vec generalized_cross(const Mat& columns);

// +1 or -1 so that sign * n has positive last component (ties: first nonzero positive).
double orientation_sign(const Vec& n);

Vec unit_normal(const Chart& chart, const Vec& p);

struct NormalJet {
  Vec normal;
  Mat d_normal;  // (d+1) x d, column j = dN/dp_j
};
NormalJet normal_jet(const Chart& chart, const Vec& p);

Mat second_fundamental_form(const Chart& chart, const Vec& p);
std::vector<double> principal_curvatures(const Chart& chart, const Vec& p);

inline constexpr double kDefaultRankTol = 1e-7;
int rank_at(const Chart& chart, const Vec& p, double rank_tol = kDefaultRankTol);

struct ShapeReport {
  Vec point;
  Vec unit_normal;
  Mat second_fundamental_form;
  std::vector<double> principal_curvatures;
  int rank = 0;
};
ShapeReport shape_report(const Chart& chart, const Vec& p, double rank_tol = kDefaultRankTol);

// Unit normal along the base curve, N(u) = N(u, v_center), and its u-derivatives.
NormalJet base_normal_jet(const RuledChart& chart, const Vec& u);

struct ConstancyReport {
  bool passed = false;
  double max_normal_deviation = 0.0;
  double max_ruling_pairing = 0.0;
  int points_checked = 0;
};
inline constexpr double kNormalConstancyTol = 1e-8;
inline constexpr double kRulingPairingTol = 1e-6;
ConstancyReport check_ruled_constancy(const RuledChart& chart, int grid = 9);

// Rigid motion x -> R x + shift applied to a ruled chart (reference normal rotated too).
RuledChart transform_ruled(const RuledChart& chart, const Mat& rotation, const Vec& shift);

// Proper rotation taking unit vector a to unit vector b, acting as the identity
// on the complement of span{a, b}.
Mat rotation_taking(const Vec& a, const Vec& b);

// Uniform grid of n points per axis including the endpoints (n >= 2).
std::vector<Vec> box_grid(const Box& box, int n);

}  // namespace fdm
