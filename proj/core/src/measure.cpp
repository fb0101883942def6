#include "fdim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fdim/errors.hpp"
#include "fdim/quadrature.hpp"

namespace fdm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Nodes/weights on the taper [inner, outer] with the weights multiplied by the taper.
Rule1D taper_rule(const BumpProfile& b, int panels) {
  Rule1D r = composite_gauss({b.inner(), b.outer()}, {}, panels);
  const double wd = b.outer() - b.inner();
  for (std::size_t i = 0; i < r.size(); ++i)
    r.weights[i] *= BumpProfile::smooth_step((r.nodes[i] - b.inner()) / wd);
  return r;
}

double bump_mass(const BumpProfile& b) {
  const Rule1D r = taper_rule(b, 64);
  CompensatedSum s;
  for (double w : r.weights) s.add(w);
  return 2.0 * (b.inner() + s.value());
}

}  // namespace

BumpProfile::BumpProfile(double inner, double outer)
    : inner_(inner), outer_(outer < 0.0 ? 2.0 * inner : outer) {
  if (!(inner_ > 0.0) || !(outer_ > inner_))
    throw ConfigError("bump profile needs 0 < inner < outer");
}

double BumpProfile::smooth_step(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - x));
  const double b = std::exp(-1.0 / x);
  return a / (a + b);
}

double BumpProfile::operator()(double s) const {
  const double a = std::abs(s);
  if (a <= inner_) return 1.0;
  if (a >= outer_) return 0.0;
  return smooth_step((a - inner_) / (outer_ - inner_));
}

std::shared_ptr<const BumpSpectrum> BumpSpectrum::of(const BumpProfile& profile) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, std::shared_ptr<const BumpSpectrum>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(profile.inner(), profile.outer());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_shared<BumpSpectrum>(profile)).first;
  return it->second;
}

BumpSpectrum::BumpSpectrum(const BumpProfile& profile) : profile_(profile) {
  const double ri = profile.inner(), ro = profile.outer(), wd = ro - ri;
  mass_ = bump_mass(profile);
  // The spectrum of the smooth step decays like exp(-c sqrt(w wd)); by
  // w wd ~ 800 it is far below roundoff for any taper.
  const double top = 800.0 / wd;
  const int panels = 8 + static_cast<int>(std::ceil(top * wd / 3.0));
  const Rule1D rule = taper_rule(profile, panels);
  step_ = 0.2 / ro;
  const int count = static_cast<int>(std::ceil(top / step_)) + 1;
  table_.assign(count, 0.0);
  table_[0] = mass_;

  // exp(i w x_i) advanced by rotation, reseeded exactly every 64 steps.
  const std::size_t m = rule.size();
  std::vector<double> c(m), s(m), rc(m), rs(m);
  for (std::size_t i = 0; i < m; ++i) {
    rc[i] = std::cos(step_ * rule.nodes[i]);
    rs[i] = std::sin(step_ * rule.nodes[i]);
  }
  for (int j = 1; j < count; ++j) {
    const double w = j * step_;
    if ((j - 1) % 64 == 0) {
      for (std::size_t i = 0; i < m; ++i) {
        c[i] = std::cos(w * rule.nodes[i]);
        s[i] = std::sin(w * rule.nodes[i]);
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        const double cn = c[i] * rc[i] - s[i] * rs[i];
        s[i] = s[i] * rc[i] + c[i] * rs[i];
        c[i] = cn;
      }
    }
    CompensatedSum t;
    for (std::size_t i = 0; i < m; ++i) t.add(rule.weights[i] * c[i]);
    table_[j] = 2.0 * (std::sin(w * ri) / w + t.value());
  }
  int last = 0;
  for (int j = 0; j < count; ++j)
    if (std::abs(table_[j]) >= 1e-15 * mass_) last = j;
  cutoff_ = std::min(count - 7, last + 1) * step_;
}

double BumpSpectrum::direct(double omega) const {
  const double ri = profile_.inner(), wd = profile_.outer() - ri;
  const double a = std::abs(omega);
  const Rule1D rule = taper_rule(profile_, 16 + static_cast<int>(std::ceil(a * wd / 2.0)));
  CompensatedSum t;
  for (std::size_t i = 0; i < rule.size(); ++i) t.add(rule.weights[i] * std::cos(a * rule.nodes[i]));
  if (a < 1e-300) return 2.0 * (ri + t.value());
  return 2.0 * (std::sin(a * ri) / a + t.value());
}

double BumpSpectrum::operator()(double omega) const {
  const double a = std::abs(omega);
  if (a >= cutoff_) return 0.0;
  const double t = a / step_;
  const int base = static_cast<int>(std::floor(t));
  const double frac = t - base;
  // Within roundoff of a node the barycentric weights overflow.
  if (frac < 1e-14) return table_[base];
  if (frac > 1.0 - 1e-14) return table_[base + 1];
  // Stencil base-5 .. base+6, mirrored through zero by evenness.
  static constexpr double kWeights[12] = {1,    -11,  55,  -165, 330, -462,
                                          462,  -330, 165, -55,  11,  -1};
  double num = 0.0, den = 0.0;
  for (int q = 0; q < 12; ++q) {
    const int j = base - 5 + q;
    const double f = table_[std::abs(j)];
    const double c = kWeights[q] / (frac - (q - 5));
    num += c * f;
    den += c;
  }
  return num / den;
}

std::vector<AxisDensity> default_density(const Box& box, double inner_fraction,
                                         double outer_fraction) {
  std::vector<AxisDensity> out;
  for (const auto& ax : box.axes) {
    const double half = 0.5 * ax.length();
    out.push_back({ax.center(), BumpProfile(inner_fraction * half, outer_fraction * half)});
  }
  return out;
}

QuadratureResult FourierMeasure::fourier_detail(const Vec& xi) const {
  QuadratureResult r;
  r.value = fourier(xi);
  r.converged = true;
  return r;
}

Vec FourierMeasure::reference_direction() const {
  Vec e = Vec::Zero(ambient_dim());
  e[ambient_dim() - 1] = 1.0;
  return e;
}

SurfaceMeasure::SurfaceMeasure(RuledChart chart, std::vector<AxisDensity> density)
    : chart_(std::move(chart)), axes_(std::move(density)) {
  if (static_cast<int>(axes_.size()) != chart_.param_dim())
    throw ConfigError("density needs one bump per chart parameter");
  const Box dom = chart_.domain();
  for (int a = 0; a < dom.dim(); ++a) {
    const Interval s = axes_[a].support();
    if (s.lo < dom.axes[a].lo - 1e-12 || s.hi > dom.axes[a].hi + 1e-12)
      throw ConfigError("density support must lie inside the chart domain");
  }
  for (int l = 0; l < chart_.num_rulings(); ++l)
    spectra_.push_back(BumpSpectrum::of(axes_[chart_.base_dim + l].profile));
  mass_ = compute_mass();
}

SurfaceMeasure SurfaceMeasure::with_default_density(const RuledChart& chart, double inner_fraction,
                                                    double outer_fraction) {
  return SurfaceMeasure(chart, default_density(chart.domain(), inner_fraction, outer_fraction));
}

double SurfaceMeasure::density(const Vec& p) const {
  double w = 1.0;
  for (int a = 0; a < p.size(); ++a) w *= axes_[a](p[a]);
  if (w == 0.0 || cutoffs_.empty()) return w;
  const Vec x = chart_.eval(chart_.split_u(p), chart_.split_v(p));
  for (const auto& f : cutoffs_) w *= f(x);
  return w;
}

Box SurfaceMeasure::support() const {
  Box b;
  for (const auto& ax : axes_) b.axes.push_back(ax.support());
  return b;
}

double SurfaceMeasure::compute_mass() const {
  if (cutoffs_.empty()) {
    double m = 1.0;
    for (const auto& ax : axes_) m *= bump_mass(ax.profile);
    return m;
  }
  std::vector<std::vector<double>> bps;
  for (const auto& ax : axes_) bps.push_back(ax.breakpoints());
  const auto r = integrate_smooth([this](const Vec& p) { return std::complex<double>(density(p)); },
                                  support(), bps, 1e-12, 1e-300, 2, 6);
  return r.value.real();
}

Vec SurfaceMeasure::reference_direction() const {
  Vec p(static_cast<int>(axes_.size()));
  for (int a = 0; a < p.size(); ++a) p[a] = axes_[a].center;
  return unit_normal(chart_.chart(), p);
}

QuadratureResult SurfaceMeasure::fourier_detail(const Vec& xi) const {
  if (xi.size() != ambient_dim()) throw ConfigError("frequency has the wrong dimension");
  if (xi.norm() == 0.0) {
    QuadratureResult r;
    r.value = mass_;
    r.converged = true;
    r.abs_mass = mass_;
    return r;
  }
  if (!cutoffs_.empty()) return fourier_direct(xi, tol_);
  return fourier_ruled(xi, tol_);
}

QuadratureResult SurfaceMeasure::fourier_ruled(const Vec& xi, double tol,
                                               const IntegrateOptions& options) const {
  const int k = chart_.base_dim;
  const int r = chart_.num_rulings();
  const double len = xi.norm();
  const Vec xh = xi / len;
  const double lambda = kTwoPi * len;
  std::vector<double> centers(r), radii(r);
  for (int l = 0; l < r; ++l) {
    centers[l] = axes_[k + l].center;
    radii[l] = axes_[k + l].profile.outer();
  }

  auto rc = std::make_shared<const RuledChart>(chart_);
  auto spectra = spectra_;
  auto fused = [rc, spectra, centers, xh, lambda, r](const Vec& u, double& ph, double& amp) {
    Vec x = rc->alpha(u).value;
    amp = 1.0;
    for (int l = 0; l < r; ++l) {
      const Vec w = rc->rulings[l](u).value;
      x += centers[l] * w;
      amp *= (*spectra[l])(lambda * w.dot(xh));
    }
    ph = x.dot(xh);
  };

  if (k == 0) {
    double ph = 0.0, amp = 0.0;
    fused(Vec(0), ph, amp);
    QuadratureResult q;
    q.value = amp * std::polar(1.0, -lambda * ph);
    q.converged = true;
    q.abs_mass = mass_;
    return q;
  }

  OscillatorySpec spec;
  spec.lambda = lambda;
  spec.sigma = -1;
  for (int a = 0; a < k; ++a) {
    spec.box.axes.push_back(axes_[a].support());
    spec.breakpoints.push_back(axes_[a].breakpoints());
    const AxisDensity ax = axes_[a];
    spec.amplitude_factors.push_back([ax](double s) { return ax(s); });
  }
  spec.phase_and_amplitude = fused;
  spec.mass_scale = mass_;
  spec.phase = [fused](const Vec& u) {
    double ph = 0.0, amp = 0.0;
    fused(u, ph, amp);
    return ph;
  };
  spec.gradient = [rc, centers, xh, k, r](const Vec& u) {
    const Jet a = rc->alpha(u);
    Vec g(k);
    for (int j = 0; j < k; ++j) g[j] = a.d1.col(j).dot(xh);
    for (int l = 0; l < r; ++l) {
      const Jet w = rc->rulings[l](u);
      for (int j = 0; j < k; ++j) g[j] += centers[l] * w.d1.col(j).dot(xh);
    }
    return g;
  };
  // The ruling spectra oscillate in u at rate lambda * radius * |d(w . xi)|.
  if (r > 0) {
    spec.local_bandwidth = [rc, radii, xh, k, r](const Vec& u) {
      Vec rate = Vec::Zero(k);
      for (int l = 0; l < r; ++l) {
        const Jet w = rc->rulings[l](u);
        for (int j = 0; j < k; ++j) rate[j] += radii[l] * std::abs(w.d1.col(j).dot(xh));
      }
      return rate;
    };
  }
  return integrate(spec, tol, options);
}

QuadratureResult SurfaceMeasure::fourier_direct(const Vec& xi, double tol,
                                                const IntegrateOptions& options) const {
  const int k = chart_.base_dim;
  const int r = chart_.num_rulings();
  const int d = k + r;
  if (d > 3) throw ConfigError("direct surface quadrature supports at most 3 parameters");
  const double len = xi.norm();
  const Vec xh = xi / len;

  auto rc = std::make_shared<const RuledChart>(chart_);
  auto cut = cutoffs_;
  OscillatorySpec spec;
  spec.lambda = kTwoPi * len;
  spec.sigma = -1;
  spec.box = support();
  for (const auto& ax : axes_) {
    spec.breakpoints.push_back(ax.breakpoints());
    spec.amplitude_factors.push_back([ax](double s) { return ax(s); });
  }
  // Measure the phase from the image of the box centre; the offset is restored
  // as a unimodular factor, which keeps the per-node phase small.
  const Vec c = spec.box.center();
  const Vec x0 = rc->eval(rc->split_u(c), rc->split_v(c));
  spec.phase_and_amplitude = [rc, cut, xh, x0](const Vec& p, double& ph, double& amp) {
    const Vec x = rc->eval(rc->split_u(p), rc->split_v(p));
    ph = (x - x0).dot(xh);
    amp = 1.0;
    for (const auto& f : cut) amp *= f(x);
  };
  spec.phase = [rc, xh, x0](const Vec& p) {
    return (rc->eval(rc->split_u(p), rc->split_v(p)) - x0).dot(xh);
  };
  spec.gradient = [rc, xh, k, r, d](const Vec& p) {
    const Vec u = rc->split_u(p);
    const Jet a = rc->alpha(u);
    Vec g(d);
    for (int j = 0; j < k; ++j) g[j] = a.d1.col(j).dot(xh);
    for (int l = 0; l < r; ++l) {
      const Jet w = rc->rulings[l](u);
      for (int j = 0; j < k; ++j) g[j] += p[k + l] * w.d1.col(j).dot(xh);
      g[k + l] = w.value.dot(xh);
    }
    return g;
  };
  QuadratureResult q = integrate(spec, tol, options);
  q.value *= std::polar(1.0, -spec.lambda * x0.dot(xh));
  return q;
}

SurfaceMeasure cutoff(const SurfaceMeasure& measure, SurfaceMeasure::AmbientFn f) {
  SurfaceMeasure out = measure;
  out.cutoffs_.push_back(std::move(f));
  out.mass_ = out.compute_mass();
  return out;
}

std::complex<double> PointMass::fourier(const Vec& xi) const {
  return weight_ * std::polar(1.0, -kTwoPi * position_.dot(xi));
}

ProductMeasure::ProductMeasure(std::shared_ptr<const FourierMeasure> first,
                               std::shared_ptr<const FourierMeasure> second)
    : first_(std::move(first)), second_(std::move(second)) {
  n1_ = first_->ambient_dim();
  n2_ = second_->ambient_dim();
  if (n1_ + n2_ > kMaxDim)
    throw AmbientDimError("product ambient_dim " + std::to_string(n1_ + n2_) +
                          " exceeds the supported maximum of 4");
}

std::complex<double> ProductMeasure::fourier(const Vec& xi) const {
  if (xi.size() != n1_ + n2_) throw ConfigError("frequency has the wrong dimension");
  return first_->fourier(xi.head(n1_)) * second_->fourier(xi.tail(n2_));
}

Vec ProductMeasure::reference_direction() const {
  Vec e = Vec::Zero(n1_ + n2_);
  e.head(n1_) = first_->reference_direction();
  return e;
}

std::optional<SurfaceMeasure> ProductMeasure::as_surface() const {
  auto a = dynamic_cast<const SurfaceMeasure*>(first_.get());
  auto b = dynamic_cast<const SurfaceMeasure*>(second_.get());
  if (!a || !b || a->has_cutoff() || b->has_cutoff()) return std::nullopt;
  const RuledChart& ca = a->chart();
  const RuledChart& cb = b->chart();
  std::vector<AxisDensity> axes;
  const auto& da = a->density_axes();
  const auto& db = b->density_axes();
  axes.insert(axes.end(), da.begin(), da.begin() + ca.base_dim);
  axes.insert(axes.end(), db.begin(), db.begin() + cb.base_dim);
  axes.insert(axes.end(), da.begin() + ca.base_dim, da.end());
  axes.insert(axes.end(), db.begin() + cb.base_dim, db.end());
  SurfaceMeasure m(product_chart(ca, cb), axes);
  m.set_tolerance(std::min(a->tolerance(), b->tolerance()));
  return m;
}

std::shared_ptr<ProductMeasure> product_measure(std::shared_ptr<const FourierMeasure> first,
                                                std::shared_ptr<const FourierMeasure> second) {
  return std::make_shared<ProductMeasure>(std::move(first), std::move(second));
}

namespace {

// Embed a jet of one factor into the product: values into rows [row0, row0 + n),
// derivatives into parameter slots [col0, col0 + k).
Jet embed_jet(const Jet& j, int amb, int k, int row0, int col0) {
  Jet out;
  out.value = Vec::Zero(amb);
  out.value.segment(row0, j.value.size()) = j.value;
  out.d1 = Mat::Zero(amb, k);
  out.d2 = SecondPartials(k, amb);
  const int kk = static_cast<int>(j.d1.cols());
  for (int c = 0; c < kk; ++c) {
    out.d1.block(row0, col0 + c, j.value.size(), 1) = j.d1.col(c);
    for (int e = 0; e < kk; ++e) out.d2(col0 + c, col0 + e).segment(row0, j.value.size()) = j.d2(c, e);
  }
  return out;
}

}  // namespace

RuledChart product_chart(const RuledChart& a, const RuledChart& b) {
  RuledChart c;
  c.ambient_dim = a.ambient_dim + b.ambient_dim;
  if (c.ambient_dim > kMaxDim)
    throw AmbientDimError("product ambient_dim " + std::to_string(c.ambient_dim) +
                          " exceeds the supported maximum of 4");
  c.base_dim = a.base_dim + b.base_dim;
  c.u_domain = a.u_domain.times(b.u_domain);
  c.v_domain = a.v_domain.times(b.v_domain);
  const int amb = c.ambient_dim, k = c.base_dim, ka = a.base_dim, kb = b.base_dim;
  const int na = a.ambient_dim;
  auto alpha_a = a.alpha, alpha_b = b.alpha;
  c.alpha = [=](const Vec& u) {
    const Jet ja = embed_jet(alpha_a(u.head(ka)), amb, k, 0, 0);
    const Jet jb = embed_jet(alpha_b(u.tail(kb)), amb, k, na, ka);
    Jet out = ja;
    out.value += jb.value;
    out.d1 += jb.d1;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) out.d2(i, j) += jb.d2(i, j);
    return out;
  };
  for (const auto& w : a.rulings)
    c.rulings.push_back([=](const Vec& u) { return embed_jet(w(u.head(ka)), amb, k, 0, 0); });
  for (const auto& w : b.rulings)
    c.rulings.push_back([=](const Vec& u) { return embed_jet(w(u.tail(kb)), amb, k, na, ka); });
  return c;
}

PushforwardMap::PushforwardMap(const RuledChart& source, const Vec& s) : source_(source), s_(s) {
  if (s.size() != source.base_dim) throw ConfigError("shift must live in the base parameter space");
  normal_ = base_normal_jet(source, s).normal;
  offset_ = source.alpha(s).value.dot(normal_);
}

Vec PushforwardMap::apply(const Vec& x) const {
  Vec y = x;
  y[y.size() - 1] = x.dot(normal_) - offset_;
  return y;
}

Vec PushforwardMap::point(const Vec& p) const {
  return apply(source_.eval(source_.split_u(p), source_.split_v(p)));
}

RuledChart PushforwardMap::image_chart() const {
  const int n = source_.ambient_dim;
  Mat L = Mat::Identity(n, n);
  L.row(n - 1) = normal_.transpose();
  Vec shift = Vec::Zero(n);
  shift[n - 1] = -offset_;
  RuledChart c = source_;
  c.reference_normal = nullptr;
  RuledChart img = transform_ruled(c, L, shift);
  return img;
}

AveragedMeasure::AveragedMeasure(SurfaceMeasure base, std::vector<AxisDensity> psi)
    : base_(std::move(base)), psi_(std::move(psi)) {
  const int k = base_.chart().base_dim;
  if (k < 1) throw ConfigError("averaging needs a base of dimension >= 1");
  if (static_cast<int>(psi_.size()) != k) throw ConfigError("psi needs one bump per base parameter");
  psi_l1_ = 1.0;
  for (int a = 0; a < k; ++a) {
    const Interval s = psi_[a].support();
    const Interval& dom = base_.chart().u_domain.axes[a];
    if (s.lo < dom.lo - 1e-12 || s.hi > dom.hi + 1e-12)
      throw ConfigError("psi support must lie inside the base domain");
    psi_l1_ *= bump_mass(psi_[a].profile);
  }
}

AveragedMeasure AveragedMeasure::with_default_psi(SurfaceMeasure base, double inner_fraction,
                                                  double outer_fraction) {
  auto psi = default_density(base.chart().u_domain, inner_fraction, outer_fraction);
  return AveragedMeasure(std::move(base), std::move(psi));
}

double AveragedMeasure::psi(const Vec& s) const {
  double w = 1.0;
  for (int a = 0; a < s.size(); ++a) w *= psi_[a](s[a]);
  return w;
}

AveragedSample AveragedMeasure::fourier_along_axis(double rho, double tol) const {
  AveragedSample out;
  if (rho == 0.0) {
    out.value = mass();
    return out;
  }
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  const RuledChart& chart = base_.chart();
  Box box;
  std::vector<std::vector<double>> bps;
  for (const auto& p : psi_) {
    box.axes.push_back(p.support());
    bps.push_back(p.breakpoints());
  }
  double max_mu = 0.0;
  auto f = [&](const Vec& s) -> std::complex<double> {
    const double w = psi(s);
    if (w == 0.0) return 0.0;
    const Vec N = base_normal_jet(chart, s).normal;
    const double phase = kTwoPi * rho * chart.alpha(s).value.dot(N);
    const std::complex<double> mu = base_.fourier(rho * N);
    max_mu = std::max(max_mu, std::abs(mu));
    return w * std::polar(1.0, phase) * mu;
  };
  const SmoothQuadrature q = integrate_smooth(f, box, bps, tol, 1e-12 * mass(), 2, 7);
  out.value = q.value;
  out.error_estimate = q.error_estimate;
  out.max_mu_abs = max_mu;
  out.outer_nodes = q.nodes;
  return out;
}

std::complex<double> averaged_fourier(const AveragedMeasure& nu, double rho) {
  return nu.fourier_along_axis(rho).value;
}

}  // namespace fdm
