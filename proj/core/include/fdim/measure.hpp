#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "fdim/geometry.hpp"
#include "fdim/oscillatory.hpp"

namespace fdm {

// Even C-infinity bump: 1 on |s| <= inner, 0 on |s| >= outer, smooth step between.
class BumpProfile {
 public:
  explicit BumpProfile(double inner, double outer = -1.0);
  double inner() const { return inner_; }
  double outer() const { return outer_; }
  double operator()(double s) const;
  // g(x) = h(1 - x) / (h(x) + h(1 - x)), h(x) = exp(-1/x) for x > 0.
  static double smooth_step(double x);

 private:
  double inner_;
  double outer_;
};

// G(w) = integral of b(x) cos(w x) dx for a centred bump b. Tabulated on a
// uniform grid and interpolated with 12-point barycentric stencils; set to zero
// beyond the frequency where it stays below 1e-15 G(0) (roundoff level).
class BumpSpectrum {
 public:
  static std::shared_ptr<const BumpSpectrum> of(const BumpProfile& profile);
  explicit BumpSpectrum(const BumpProfile& profile);
  double operator()(double omega) const;
  double cutoff() const { return cutoff_; }
  double mass() const { return mass_; }
  // Quadrature evaluation, used to build and to check the table.
  double direct(double omega) const;

 private:
  BumpProfile profile_;
  double mass_ = 0.0;
  double cutoff_ = 0.0;
  double step_ = 0.0;
  std::vector<double> table_;
};

struct AxisDensity {
  double center = 0.0;
  BumpProfile profile{1.0};
  double operator()(double s) const { return profile(s - center); }
  std::vector<double> breakpoints() const {
    return {center - profile.outer(), center - profile.inner(), center + profile.inner(),
            center + profile.outer()};
  }
  Interval support() const { return {center - profile.outer(), center + profile.outer()}; }
};

// Tensor bumps centred in each axis of `box` with radii fractions of the half-width.
std::vector<AxisDensity> default_density(const Box& box, double inner_fraction = 0.5,
                                         double outer_fraction = 0.75);

// Anything with a Fourier transform xi -> integral exp(-2 pi i x.xi) dmu(x).
class FourierMeasure {
 public:
  virtual ~FourierMeasure() = default;
  virtual int ambient_dim() const = 0;
  virtual double mass() const = 0;
  virtual std::complex<double> fourier(const Vec& xi) const = 0;
  virtual QuadratureResult fourier_detail(const Vec& xi) const;
  // A direction along which the transform is expected to decay slowest.
  virtual Vec reference_direction() const;
};

// Push-forward of density(p) dp under a chart; the density is a tensor product of
// bumps, optionally multiplied by cutoff functions of the ambient point.
class SurfaceMeasure : public FourierMeasure {
 public:
  using AmbientFn = std::function<double(const Vec&)>;

  SurfaceMeasure(RuledChart chart, std::vector<AxisDensity> density);
  static SurfaceMeasure with_default_density(const RuledChart& chart, double inner_fraction = 0.5,
                                             double outer_fraction = 0.75);

  const RuledChart& chart() const { return chart_; }
  const std::vector<AxisDensity>& density_axes() const { return axes_; }
  bool has_cutoff() const { return !cutoffs_.empty(); }
  double density(const Vec& p) const;
  Box support() const;

  int ambient_dim() const override { return chart_.ambient_dim; }
  double mass() const override { return mass_; }
  std::complex<double> fourier(const Vec& xi) const override { return fourier_detail(xi).value; }
  QuadratureResult fourier_detail(const Vec& xi) const override;
  Vec reference_direction() const override;

  // Ruled route: the ruling integrals are done in closed form through the bump
  // spectra, leaving a k-dimensional oscillatory integral.
  QuadratureResult fourier_ruled(const Vec& xi, double tol,
                                 const IntegrateOptions& options = {}) const;
  // Direct d-dimensional oscillatory quadrature over the parameter box.
  QuadratureResult fourier_direct(const Vec& xi, double tol,
                                  const IntegrateOptions& options = {}) const;

  double tolerance() const { return tol_; }
  void set_tolerance(double tol) { tol_ = tol; }

  friend SurfaceMeasure cutoff(const SurfaceMeasure& measure, SurfaceMeasure::AmbientFn f);

 private:
  double compute_mass() const;

  RuledChart chart_;
  std::vector<AxisDensity> axes_;
  std::vector<AmbientFn> cutoffs_;
  std::vector<std::shared_ptr<const BumpSpectrum>> spectra_;  // one per ruling
  double mass_ = 0.0;
  double tol_ = 1e-11;
};

// New measure with density w(p) f(Phi(p)).
SurfaceMeasure cutoff(const SurfaceMeasure& measure, SurfaceMeasure::AmbientFn f);

class PointMass : public FourierMeasure {
 public:
  PointMass(Vec position, double weight = 1.0) : position_(std::move(position)), weight_(weight) {}
  int ambient_dim() const override { return static_cast<int>(position_.size()); }
  double mass() const override { return weight_; }
  std::complex<double> fourier(const Vec& xi) const override;

 private:
  Vec position_;
  double weight_;
};

// mu_S x mu_T on R^{n+m}, n + m <= 4.
class ProductMeasure : public FourierMeasure {
 public:
  ProductMeasure(std::shared_ptr<const FourierMeasure> first,
                 std::shared_ptr<const FourierMeasure> second);
  int ambient_dim() const override { return n1_ + n2_; }
  double mass() const override { return first_->mass() * second_->mass(); }
  std::complex<double> fourier(const Vec& xi) const override;
  Vec reference_direction() const override;
  const FourierMeasure& first() const { return *first_; }
  const FourierMeasure& second() const { return *second_; }
  // The same measure as a single chart push-forward, when both factors are
  // cutoff-free surface measures.
  std::optional<SurfaceMeasure> as_surface() const;

 private:
  std::shared_ptr<const FourierMeasure> first_;
  std::shared_ptr<const FourierMeasure> second_;
  int n1_ = 0;
  int n2_ = 0;
};

std::shared_ptr<ProductMeasure> product_measure(std::shared_ptr<const FourierMeasure> first,
                                                std::shared_ptr<const FourierMeasure> second);

// Product chart (u1, u2, v1, v2) -> (Phi1(u1, v1), Phi2(u2, v2)).
RuledChart product_chart(const RuledChart& a, const RuledChart& b);

// T_s: first d coordinates kept, last replaced by (x - alpha(s)) . N(s).
class PushforwardMap {
 public:
  PushforwardMap(const RuledChart& source, const Vec& s);
  const Vec& shift() const { return s_; }
  const Vec& normal() const { return normal_; }
  double offset() const { return offset_; }  // alpha(s) . N(s)
  Vec apply(const Vec& x) const;
  Vec point(const Vec& p) const;  // T_s(Phi(p))
  RuledChart image_chart() const;

 private:
  RuledChart source_;
  Vec s_;
  Vec normal_;
  double offset_ = 0.0;
};

struct AveragedSample {
  std::complex<double> value;
  double error_estimate = 0.0;
  double max_mu_abs = 0.0;  // max over evaluated s of |mu^(rho N(s))|
  long long outer_nodes = 0;
};

// <f, nu> = integral of <f, T_s# mu> psi(s) ds.
class AveragedMeasure {
 public:
  AveragedMeasure(SurfaceMeasure base, std::vector<AxisDensity> psi);
  static AveragedMeasure with_default_psi(SurfaceMeasure base, double inner_fraction = 0.5,
                                          double outer_fraction = 0.75);

  const SurfaceMeasure& base() const { return base_; }
  const std::vector<AxisDensity>& psi_axes() const { return psi_; }
  double psi(const Vec& s) const;
  double psi_l1() const { return psi_l1_; }
  double mass() const { return base_.mass() * psi_l1_; }

  // nu^(rho e_{d+1}) = int psi(s) exp(2 pi i rho alpha(s).N(s)) mu^(rho N(s)) ds.
  AveragedSample fourier_along_axis(double rho, double tol = 1e-8) const;

 private:
  SurfaceMeasure base_;
  std::vector<AxisDensity> psi_;
  double psi_l1_ = 0.0;
};

std::complex<double> averaged_fourier(const AveragedMeasure& nu, double rho);

}  // namespace fdm
