#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fdim/analysis.hpp"
#include "fdim/catalog.hpp"
#include "fdim/errors.hpp"
#include "fdim/measure.hpp"
#include "oracles.hpp"

using namespace fdm;
using cd = std::complex<double>;

namespace {

SurfaceMeasure measure_of(const std::string& name) {
  const SurfaceEntry e = find_surface(name);
  return SurfaceMeasure::with_default_density(e.chart, e.density_inner, e.density_outer);
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST(Bump, ProfileShape) {
  const BumpProfile b(0.25);
  EXPECT_DOUBLE_EQ(b.outer(), 0.5);
  EXPECT_EQ(b(0.0), 1.0);
  EXPECT_EQ(b(0.25), 1.0);
  EXPECT_EQ(b(0.5), 0.0);
  EXPECT_GT(b(0.4), 0.0);
  EXPECT_LT(b(0.4), 1.0);
  EXPECT_EQ(b(-0.3), b(0.3));
  EXPECT_THROW(BumpProfile(0.5, 0.4), ConfigError);
}

TEST(Bump, SpectrumTableMatchesDirectQuadrature) {
  const BumpSpectrum g{BumpProfile(0.25)};
  EXPECT_NEAR(g(0.0), g.mass(), 1e-15);
  // The step satisfies g(x) + g(1 - x) = 1, so the mass is inner + outer.
  EXPECT_NEAR(g.mass(), 0.75, 1e-14);
  for (double w = 0.0; w < 300.0; w += 3.7)
    EXPECT_NEAR(g(w), g.direct(w), 1e-13 * g.mass()) << w;
  EXPECT_EQ(g(g.cutoff() * 1.01), 0.0);
}

TEST(Measure, ZeroFrequencyGivesMass) {
  for (const SurfaceEntry& e : catalog()) {
    const SurfaceMeasure mu = SurfaceMeasure::with_default_density(e.chart, e.density_inner, e.density_outer);
    EXPECT_GT(mu.mass(), 0.0);
    EXPECT_EQ(mu.fourier(Vec::Zero(e.chart.ambient_dim)), cd(mu.mass(), 0.0)) << e.name;
  }
}

TEST(Measure, HyperplaneNormalTransformIsConstant) {
  const SurfaceMeasure mu = measure_of("hyperplane");
  for (double rho : {1.0, 100.0, 4096.0})
    EXPECT_NEAR(std::abs(mu.fourier(vec3(0, 0, rho)) - mu.mass()), 0.0, 1e-13 * mu.mass());
}

TEST(Measure, RuledRouteMatchesDirectRoute) {
  for (const char* name : {"helix_tangent", "cylinder", "light_cone", "hyperboloid_control"}) {
    const SurfaceMeasure mu = measure_of(name);
    for (const Vec& xi : {vec3(3, -2, 5), vec3(0.5, 12, -7), vec3(-20, 1, 30)}) {
      const cd a = mu.fourier_ruled(xi, 1e-12).value;
      const cd b = mu.fourier_direct(xi, 1e-12).value;
      EXPECT_LE(std::abs(a - b), 1e-10 * mu.mass()) << name;
    }
  }
}

TEST(Measure, TransformIsParametrizationIndependent) {
  // Pull the helix measure back through p = c + q + 0.2 (q - c)^3 on each axis.
  const SurfaceMeasure mu = measure_of("helix_tangent");
  const Chart chart = mu.chart().chart();
  std::vector<oracle::AxisMap> maps;
  std::vector<std::vector<double>> bps;
  for (const AxisDensity& ax : mu.density_axes()) {
    const double c = ax.center;
    oracle::AxisMap m;
    m.g = [c](double q) { return q + 0.2 * std::pow(q - c, 3); };
    m.dg = [c](double q) { return 1.0 + 0.6 * (q - c) * (q - c); };
    m.d2g = [c](double q) { return 1.2 * (q - c); };
    m.g_inverse = [m](double p) {
      double q = p;
      for (int it = 0; it < 60; ++it) q -= (m.g(q) - p) / m.dg(q);
      return q;
    };
    std::vector<double> bq;
    for (double b : ax.breakpoints()) bq.push_back(m.g_inverse(b));
    bps.push_back(bq);
    maps.push_back(m);
  }
  const Chart re = oracle::reparametrize(chart, maps);
  auto w = [&](const Vec& q) {
    Vec p(q.size());
    double jac = 1.0;
    for (int a = 0; a < q.size(); ++a) {
      p[a] = maps[static_cast<std::size_t>(a)].g(q[a]);
      jac *= maps[static_cast<std::size_t>(a)].dg(q[a]);
    }
    return mu.density(p) * jac;
  };
  for (const Vec& xi : {vec3(0, 0, 0), vec3(2, 1, 4), vec3(-5, 8, 16)}) {
    const cd a = mu.fourier(xi);
    const cd b = oracle::chart_transform(re, w, bps, xi);
    EXPECT_LE(std::abs(a - b), 1e-9 * mu.mass());
  }
}

TEST(Measure, PushforwardPoints) {
  const RuledChart helix = find_surface("helix_tangent").chart;
  Vec p(2);
  p << 0.13, 1.4;
  const Vec x = helix.chart().eval(p);
  const PushforwardMap t0(helix, Vec::Zero(1));
  EXPECT_LT((t0.point(p) - x).norm(), 1e-15);
  for (double s : {-0.2, 0.05, 0.17}) {
    Vec sv(1);
    sv << s;
    const PushforwardMap ts(helix, sv);
    const Vec n = vec3(3 * s * s, -3 * s, 1);
    const Vec y = ts.point(p);
    EXPECT_EQ(y.head(2), x.head(2));
    EXPECT_NEAR(y[2], x.dot(n) / n.norm() - s * s * s / n.norm(), 1e-14);
  }
}

TEST(Measure, PerturbedHelixImageCurve) {
  const RuledChart c = find_surface("perturbed_helix").chart;
  for (double s : {-0.08, 0.03}) {
    Vec sv(1);
    sv << s;
    const PushforwardMap ts(c, sv);
    const Vec n = vec3(-6 * std::pow(s, 4) + 3 * s * s, -3 * s, 6 * s * s + 1);
    for (double t : {-0.1, 0.0, 0.07}) {
      Vec p(2);
      p << t, 0.0;
      const double d = t - s;
      const double expect = ((1 - 6 * s * s) * d * d * d - 3 * s * d * d * d * d) / n.norm();
      EXPECT_NEAR(ts.point(p)[2], expect, 1e-14);
    }
  }
}

TEST(Measure, ImageSurfacesKeepRankAndRulings) {
  std::mt19937_64 rng(31);
  for (const char* name : {"helix_tangent", "perturbed_helix", "moment_curve_tangent"}) {
    const SurfaceEntry e = find_surface(name);
    const Box& ub = e.chart.u_domain;
    std::uniform_real_distribution<double> us(ub.axes[0].lo, ub.axes[0].hi);
    for (int i = 0; i < 10; ++i) {
      Vec s(1);
      s << us(rng);
      const RuledChart img = PushforwardMap(e.chart, s).image_chart();
      EXPECT_TRUE(check_ruled_constancy(img).passed) << name;
      const Chart ch = img.chart();
      for (int j = 0; j < 50; ++j) {
        Vec p(ch.param_dim());
        for (int a = 0; a < p.size(); ++a) {
          std::uniform_real_distribution<double> pa(ch.domain().axes[a].lo, ch.domain().axes[a].hi);
          p[a] = pa(rng);
        }
        EXPECT_EQ(rank_at(ch, p), e.expected_rank) << name;
      }
    }
  }
}

TEST(Measure, PushforwardConservesMassAndModulus) {
  const SurfaceMeasure mu = measure_of("helix_tangent");
  for (double s : {-0.1, 0.0, 0.12}) {
    Vec sv(1);
    sv << s;
    const PushforwardMap ts(mu.chart(), sv);
    const SurfaceMeasure image(ts.image_chart(), mu.density_axes());
    EXPECT_NEAR(image.mass(), mu.mass(), 1e-14);
    for (double rho : {16.0, 100.0, 700.0}) {
      Vec e3 = Vec::Zero(3);
      e3[2] = rho;
      const double a = std::abs(image.fourier(e3));
      const double b = std::abs(mu.fourier(rho * ts.normal()));
      EXPECT_LE(std::abs(a - b), 1e-10 * b) << s << " " << rho;
    }
  }
}

TEST(Measure, AveragedMeasureSmallFrequencyLimit) {
  const SurfaceEntry e = find_surface("helix_tangent");
  const AveragedMeasure nu = AveragedMeasure::with_default_psi(measure_of("helix_tangent"),
                                                               e.density_inner, e.density_outer);
  EXPECT_NEAR(std::abs(nu.fourier_along_axis(1e-9).value), nu.mass(), 1e-9 * nu.mass());
  EXPECT_NEAR(nu.mass(), nu.base().mass() * nu.psi_l1(), 1e-15);
}

TEST(Measure, AveragedTransformMatchesDirectIntegral) {
  const SurfaceEntry e = find_surface("helix_tangent");
  const AveragedMeasure nu = AveragedMeasure::with_default_psi(measure_of("helix_tangent"),
                                                               e.density_inner, e.density_outer);
  const cd a = averaged_fourier(nu, 64.0);
  const cd b = oracle::averaged_direct(nu, 64.0);
  EXPECT_LE(std::abs(std::abs(a) - std::abs(b)), 1e-4 * std::abs(b));
  EXPECT_LE(std::abs(a - b), 1e-5 * std::abs(b));
}

TEST(Measure, CutoffBehaviour) {
  const SurfaceMeasure mu = measure_of("circle_arc");
  const SurfaceMeasure same = cutoff(mu, [](const Vec&) { return 1.0; });
  EXPECT_NEAR(same.mass(), mu.mass(), 1e-14);
  Vec xi(2);
  xi << 3.0, 40.0;
  EXPECT_LE(std::abs(same.fourier(xi) - mu.fourier(xi)), 1e-11 * mu.mass());
  const SurfaceMeasure zero = cutoff(mu, [](const Vec&) { return 0.0; });
  EXPECT_EQ(zero.mass(), 0.0);
  EXPECT_EQ(std::abs(zero.fourier(xi)), 0.0);
  const BumpProfile f(0.15, 0.3);
  const SurfaceMeasure half = cutoff(mu, [f](const Vec& x) { return f(x[0]); });
  EXPECT_LT(half.mass(), mu.mass());
}

TEST(Measure, ProductFactorizes) {
  auto a = std::make_shared<SurfaceMeasure>(measure_of("circle_arc"));
  auto b = std::make_shared<SurfaceMeasure>(measure_of("circle_arc"));
  const auto prod = product_measure(a, b);
  EXPECT_EQ(prod->ambient_dim(), 4);
  EXPECT_NEAR(std::abs(prod->fourier(Vec::Zero(4))), a->mass() * b->mass(), 1e-15);
  const auto direct = prod->as_surface();
  ASSERT_TRUE(direct.has_value());
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  IntegrateOptions fine;
  fine.floor_relative = 1e-15;
  for (int i = 0; i < 10; ++i) {
    Vec xi(4);
    for (int j = 0; j < 4; ++j) xi[j] = u(rng);
    const cd f = prod->fourier(xi);
    const cd d = direct->fourier_direct(xi, 1e-12, fine).value;
    EXPECT_LE(std::abs(f - d), 1e-10 * std::abs(d)) << i;
  }
  Vec xi(4);
  xi << 5, 7, 0, 0;
  Vec x1(2);
  x1 << 5, 7;
  EXPECT_LE(std::abs(direct->fourier(xi) - a->fourier(x1) * b->mass()), 1e-10 * std::abs(a->fourier(x1)));
}

TEST(Measure, ProductDimensionGuard) {
  auto a = std::make_shared<SurfaceMeasure>(measure_of("circle_arc"));
  auto s = std::make_shared<SurfaceMeasure>(measure_of("sphere_patch"));
  EXPECT_THROW(product_measure(a, s), AmbientDimError);
}

TEST(Measure, PointMassFactorGivesFlatDirection) {
  auto a = std::make_shared<SurfaceMeasure>(measure_of("circle_arc"));
  Vec origin = Vec::Zero(1);
  auto pm = std::make_shared<PointMass>(origin, 2.0);
  const auto prod = product_measure(a, pm);
  Vec dir(3);
  dir << 0, 0, 1;
  std::vector<double> rhos;
  for (int e = 4; e <= 10; ++e) rhos.push_back(std::ldexp(1.0, e));
  const DecayFit fit = fit_decay(sample_along(*prod, dir, rhos), prod->mass());
  EXPECT_NEAR(fit.slope, 0.0, 1e-12);
}
