#include "fdim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "fdim/errors.hpp"

namespace fdm {

Chart::Chart(int ambient_dim, Box domain, EvalFn eval, JacobianFn jacobian, HessianFn hessian)
    : ambient_dim_(ambient_dim),
      domain_(std::move(domain)),
      eval_(std::move(eval)),
      jacobian_(std::move(jacobian)),
      hessian_(std::move(hessian)) {
  if (ambient_dim_ < 2 || ambient_dim_ > kMaxDim)
    throw AmbientDimError("chart ambient dimension must be between 2 and 4");
  if (domain_.dim() != param_dim()) throw ConfigError("chart domain must have dimension d");
}

Mat Chart::jacobian(const Vec& p) const {
  if (jacobian_) return jacobian_(p);
  return jacobian_fd(p);
}

SecondPartials Chart::hessian(const Vec& p) const {
  if (hessian_) return hessian_(p);
  return hessian_fd(p);
}

Mat Chart::jacobian_fd(const Vec& p, double h) const {
  const int d = param_dim();
  Mat J(ambient_dim_, d);
  for (int j = 0; j < d; ++j) {
    Vec a = p, b = p;
    a[j] += h;
    b[j] -= h;
    J.col(j) = (eval_(a) - eval_(b)) / (2.0 * h);
  }
  return J;
}

SecondPartials Chart::hessian_fd(const Vec& p, double h) const {
  const int d = param_dim();
  SecondPartials H(d, ambient_dim_);
  if (jacobian_) {
    for (int j = 0; j < d; ++j) {
      Vec a = p, b = p;
      a[j] += h;
      b[j] -= h;
      Mat dJ = (jacobian_(a) - jacobian_(b)) / (2.0 * h);
      for (int i = 0; i < d; ++i) H(i, j) = dJ.col(i);
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        Vec s = 0.5 * (H(i, j) + H(j, i));
        H(i, j) = s;
        H(j, i) = s;
      }
    return H;
  }
  // Second differences of the evaluation need a larger step to balance roundoff.
  const double hh = std::max(h, 1e-4);
  const Vec f0 = eval_(p);
  for (int i = 0; i < d; ++i) {
    Vec a = p, b = p;
    a[i] += hh;
    b[i] -= hh;
    H(i, i) = (eval_(a) - 2.0 * f0 + eval_(b)) / (hh * hh);
    for (int j = i + 1; j < d; ++j) {
      Vec pp = p, pm = p, mp = p, mm = p;
      pp[i] += hh; pp[j] += hh;
      pm[i] += hh; pm[j] -= hh;
      mp[i] -= hh; mp[j] += hh;
      mm[i] -= hh; mm[j] -= hh;
      H(i, j) = (eval_(pp) - eval_(pm) - eval_(mp) + eval_(mm)) / (4.0 * hh * hh);
      H(j, i) = H(i, j);
    }
  }
  return H;
}

Vec RuledChart::join(const Vec& u, const Vec& v) const {
  Vec p(base_dim + num_rulings());
  p.head(base_dim) = u;
  p.tail(num_rulings()) = v;
  return p;
}

Vec RuledChart::eval(const Vec& u, const Vec& v) const {
  Vec x = alpha(u).value;
  for (int l = 0; l < num_rulings(); ++l) x += v[l] * rulings[l](u).value;
  return x;
}

namespace {

struct RuledDerivatives {
  Vec value;
  Mat jacobian;
  SecondPartials hessian;
};

RuledDerivatives ruled_derivatives(const RuledChart& rc, const Vec& p) {
  const int k = rc.base_dim;
  const int r = rc.num_rulings();
  const int d = k + r;
  const int n = rc.ambient_dim;
  const Vec u = p.head(k);
  RuledDerivatives out;
  Jet a = rc.alpha(u);
  out.value = a.value;
  out.jacobian = Mat::Zero(n, d);
  out.hessian = SecondPartials(d, n);
  for (int i = 0; i < k; ++i) {
    out.jacobian.col(i) = a.d1.col(i);
    for (int j = 0; j < k; ++j) out.hessian(i, j) = a.d2(i, j);
  }
  for (int l = 0; l < r; ++l) {
    const double vl = p[k + l];
    Jet w = rc.rulings[l](u);
    out.value += vl * w.value;
    out.jacobian.col(k + l) = w.value;
    for (int i = 0; i < k; ++i) {
      out.jacobian.col(i) += vl * w.d1.col(i);
      for (int j = 0; j < k; ++j) out.hessian(i, j) += vl * w.d2(i, j);
      out.hessian(i, k + l) = w.d1.col(i);
      out.hessian(k + l, i) = w.d1.col(i);
    }
  }
  return out;
}

NormalJet normal_jet_from(const Mat& J, const SecondPartials& H) {
  const int d = static_cast<int>(J.cols());
  const Vec n = generalized_cross(J);
  double scale = 1.0;
  for (int c = 0; c < d; ++c) scale *= J.col(c).norm();
  const double nn = n.norm();
  if (!(scale > 0.0) || nn <= 1e-12 * scale)
    throw DegenerateJacobian("jacobian has rank below d at the requested point");
  const double s = orientation_sign(n);
  NormalJet out;
  out.normal = (s / nn) * n;
  out.d_normal = Mat::Zero(J.rows(), d);
  for (int j = 0; j < d; ++j) {
    Vec dn = Vec::Zero(J.rows());
    for (int c = 0; c < d; ++c) {
      Mat Jc = J;
      Jc.col(c) = H(c, j);
      dn += generalized_cross(Jc);
    }
    out.d_normal.col(j) = (s / nn) * (dn - (s * out.normal) * (s * out.normal).dot(dn));
  }
  return out;
}

}  // namespace

Chart RuledChart::chart() const {
  auto self = std::make_shared<const RuledChart>(*this);
  return Chart(
      ambient_dim, domain(),
      [self](const Vec& p) { return self->eval(self->split_u(p), self->split_v(p)); },
      [self](const Vec& p) { return ruled_derivatives(*self, p).jacobian; },
      [self](const Vec& p) { return ruled_derivatives(*self, p).hessian; });
}

Vec generalized_cross(const Mat& columns) {
  const int n = static_cast<int>(columns.rows());
  const int d = static_cast<int>(columns.cols());
  if (d != n - 1) throw ConfigError("generalized cross product needs d vectors in R^{d+1}");
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    Mat minor(d, d);
    for (int r = 0, rr = 0; r < n; ++r) {
      if (r == i) continue;
      minor.row(rr++) = columns.row(r);
    }
    const double det = d == 0 ? 1.0 : minor.determinant();
    out[i] = (i % 2 == 0) ? det : -det;
  }
  return out;
}

double orientation_sign(const Vec& n) {
  const double tie = 1e-14 * n.norm();
  const double last = n[n.size() - 1];
  if (std::abs(last) > tie) return last > 0.0 ? 1.0 : -1.0;
  for (int i = 0; i < n.size(); ++i)
    if (std::abs(n[i]) > tie) return n[i] > 0.0 ? 1.0 : -1.0;
  return 1.0;
}

Vec unit_normal(const Chart& chart, const Vec& p) {
  const Mat J = chart.jacobian(p);
  const Vec n = generalized_cross(J);
  double scale = 1.0;
  for (int c = 0; c < J.cols(); ++c) scale *= J.col(c).norm();
  const double nn = n.norm();
  if (!(scale > 0.0) || nn <= 1e-12 * scale)
    throw DegenerateJacobian("jacobian has rank below d at the requested point");
  return (orientation_sign(n) / nn) * n;
}

NormalJet normal_jet(const Chart& chart, const Vec& p) {
  return normal_jet_from(chart.jacobian(p), chart.hessian(p));
}

Mat second_fundamental_form(const Chart& chart, const Vec& p) {
  const int d = chart.param_dim();
  const Vec N = unit_normal(chart, p);
  const SecondPartials H = chart.hessian(p);
  Mat II(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) II(i, j) = H(i, j).dot(N);
  return 0.5 * (II + II.transpose());
}

namespace {

std::vector<double> curvatures_from(const Mat& J, const Mat& II) {
  const Eigen::MatrixXd G = (J.transpose() * J).eval();
  const Eigen::MatrixXd B = II;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(B, G, Eigen::EigenvaluesOnly);
  std::vector<double> k(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(k.begin(), k.end());
  return k;
}

}  // namespace

std::vector<double> principal_curvatures(const Chart& chart, const Vec& p) {
  return curvatures_from(chart.jacobian(p), second_fundamental_form(chart, p));
}

int rank_at(const Chart& chart, const Vec& p, double rank_tol) {
  const auto k = principal_curvatures(chart, p);
  return static_cast<int>(std::count_if(k.begin(), k.end(),
                                        [&](double x) { return std::abs(x) > rank_tol; }));
}

ShapeReport shape_report(const Chart& chart, const Vec& p, double rank_tol) {
  ShapeReport r;
  r.point = p;
  r.unit_normal = unit_normal(chart, p);
  r.second_fundamental_form = second_fundamental_form(chart, p);
  r.principal_curvatures = curvatures_from(chart.jacobian(p), r.second_fundamental_form);
  r.rank = static_cast<int>(std::count_if(r.principal_curvatures.begin(),
                                          r.principal_curvatures.end(),
                                          [&](double x) { return std::abs(x) > rank_tol; }));
  return r;
}

NormalJet base_normal_jet(const RuledChart& chart, const Vec& u) {
  const Vec p = chart.join(u, chart.v_domain.center());
  RuledDerivatives rd = ruled_derivatives(chart, p);
  NormalJet full = normal_jet_from(rd.jacobian, rd.hessian);
  NormalJet out;
  out.normal = full.normal;
  out.d_normal = full.d_normal.leftCols(chart.base_dim);
  return out;
}

ConstancyReport check_ruled_constancy(const RuledChart& chart, int grid) {
  ConstancyReport rep;
  const auto us = box_grid(chart.u_domain, grid);
  const auto vs = box_grid(chart.v_domain, grid);
  for (const Vec& u : us) {
    Vec n0;
    std::vector<Vec> ws;
    for (int l = 0; l < chart.num_rulings(); ++l) ws.push_back(chart.rulings[l](u).value);
    for (const Vec& v : vs) {
      RuledDerivatives rd = ruled_derivatives(chart, chart.join(u, v));
      NormalJet nj = normal_jet_from(rd.jacobian, rd.hessian);
      if (n0.size() == 0) n0 = nj.normal;
      rep.max_normal_deviation = std::max(rep.max_normal_deviation, (nj.normal - n0).norm());
      for (const Vec& w : ws)
        for (int j = 0; j < chart.base_dim; ++j)
          rep.max_ruling_pairing =
              std::max(rep.max_ruling_pairing, std::abs(w.dot(nj.d_normal.col(j))));
      ++rep.points_checked;
    }
  }
  rep.passed = rep.max_normal_deviation < kNormalConstancyTol &&
               rep.max_ruling_pairing < kRulingPairingTol;
  return rep;
}

namespace {

JetFn transform_jet(JetFn f, const Mat& R, const Vec& shift) {
  return [f = std::move(f), R, shift](const Vec& u) {
    Jet j = f(u);
    j.value = R * j.value + shift;
    if (j.d1.size() > 0) j.d1 = R * j.d1;
    for (int a = 0; a < j.d2.dim; ++a)
      for (int b = 0; b < j.d2.dim; ++b) j.d2(a, b) = R * j.d2(a, b);
    return j;
  };
}

}  // namespace

RuledChart transform_ruled(const RuledChart& chart, const Mat& rotation, const Vec& shift) {
  RuledChart out = chart;
  const Vec zero = Vec::Zero(chart.ambient_dim);
  out.alpha = transform_jet(chart.alpha, rotation, shift);
  for (auto& w : out.rulings) w = transform_jet(w, rotation, zero);
  if (chart.reference_normal) out.reference_normal = transform_jet(chart.reference_normal, rotation, zero);
  return out;
}

Mat rotation_taking(const Vec& a, const Vec& b) {
  const int n = static_cast<int>(a.size());
  Mat I = Mat::Identity(n, n);
  const double c = a.dot(b);
  if (c > 1.0 - 1e-15) return I;
  if (c < -1.0 + 1e-15) {
    // Half turn in a plane containing a.
    Vec e = Vec::Zero(n);
    int idx = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(a[i]) < std::abs(a[idx])) idx = i;
    e[idx] = 1.0;
    Vec q = (e - a * a.dot(e)).normalized();
    return I - 2.0 * a * a.transpose() - 2.0 * q * q.transpose();
  }
  const Vec q = (b - c * a).normalized();
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  return I + (c - 1.0) * (a * a.transpose() + q * q.transpose()) +
         s * (q * a.transpose() - a * q.transpose());
}

std::vector<Vec> box_grid(const Box& box, int n) {
  const int d = box.dim();
  std::vector<Vec> out;
  if (d == 0) {
    out.emplace_back(0);
    return out;
  }
  n = std::max(n, 2);
  int total = 1;
  for (int i = 0; i < d; ++i) total *= n;
  out.reserve(total);
  for (int idx = 0; idx < total; ++idx) {
    Vec p(d);
    int rest = idx;
    for (int a = 0; a < d; ++a) {
      const int k = rest % n;
      rest /= n;
      p[a] = box.axes[a].lo + box.axes[a].length() * k / (n - 1);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace fdm
