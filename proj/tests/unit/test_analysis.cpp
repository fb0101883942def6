#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fdim/analysis.hpp"
#include "fdim/errors.hpp"

using namespace fdm;

namespace {

std::vector<DecaySample> power_law(double c, double p, int lo = 4, int hi = 12) {
  std::vector<DecaySample> out;
  for (double rho : dyadic_rhos(lo, hi)) out.push_back({rho, c * std::pow(rho, -p)});
  return out;
}

}  // namespace

TEST(DecayFit, RecoversPowerLaws) {
  for (double p : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const DecayFit f = fit_decay(power_law(3.0, p), 3.0);
    EXPECT_NEAR(f.slope, -p, 1e-12);
    EXPECT_NEAR(std::exp2(f.intercept), 3.0, 3e-10);
    EXPECT_LT(f.max_residual, 1e-12);
    EXPECT_FALSE(f.floor_hit);
    EXPECT_FALSE(f.slope_is_bound);
  }
}

TEST(DecayFit, ComplexValuesUseModulus) {
  std::vector<DecaySample> s;
  for (double rho : dyadic_rhos(4, 10)) s.push_back({rho, std::polar(1.0 / rho, rho)});
  EXPECT_NEAR(fit_decay(s, 1.0).slope, -1.0, 1e-12);
}

TEST(DecayFit, FloorIsExcludedAndFlagged) {
  auto s = power_law(1.0, 0.5);
  s[7].value = 1e-20;
  s[8].value = 0.0;
  const DecayFit f = fit_decay(s, 1.0);
  EXPECT_TRUE(f.floor_hit);
  EXPECT_TRUE(f.slope_is_bound);
  EXPECT_TRUE(f.floored[7]);
  EXPECT_FALSE(f.floored[6]);
  EXPECT_NEAR(f.slope, -0.5, 1e-12);
}

TEST(DecayFit, SingleSurvivorGivesSecantBound) {
  std::vector<DecaySample> s;
  for (double rho : dyadic_rhos(4, 8)) s.push_back({rho, rho == 16.0 ? 1e-3 : 1e-30});
  const DecayFit f = fit_decay(s, 1.0);
  EXPECT_TRUE(f.slope_is_bound);
  // Secant from log2(1e-3) at rho 16 to log2(1e-13) at rho 32.
  EXPECT_NEAR(f.slope, std::log2(1e-13) - std::log2(1e-3), 1e-9);
}

TEST(DecayFit, RejectsBadInput) {
  EXPECT_THROW(fit_decay(power_law(1.0, 1.0, 4, 7), 1.0), ConfigError);
  auto s = power_law(1.0, 1.0);
  std::swap(s[2], s[3]);
  EXPECT_THROW(fit_decay(s, 1.0), ConfigError);
  std::vector<DecaySample> tiny;
  for (double rho : dyadic_rhos(4, 9)) tiny.push_back({rho, 1e-16});
  EXPECT_THROW(fit_decay(tiny, 1.0), AllFloored);
  auto skipped = power_law(1.0, 1.0);
  for (auto& x : skipped) x.skipped = true;
  EXPECT_THROW(fit_decay(skipped, 1.0), AllFloored);
}

TEST(Directions, DyadicGrid) {
  const auto r = dyadic_rhos(4, 12);
  ASSERT_EQ(r.size(), 9u);
  EXPECT_EQ(r.front(), 16.0);
  EXPECT_EQ(r.back(), 4096.0);
  EXPECT_THROW(dyadic_rhos(5, 5), ConfigError);
}

TEST(Directions, SphereGridsContainPoles) {
  for (int n : {2, 3, 4}) {
    const auto dirs = sphere_directions(n, 64);
    ASSERT_EQ(dirs.size(), 64u);
    bool north = false, south = false;
    for (const Vec& d : dirs) {
      EXPECT_NEAR(d.norm(), 1.0, 1e-14);
      if (std::abs(d[n - 1] - 1.0) < 1e-14) north = true;
      if (std::abs(d[n - 1] + 1.0) < 1e-14) south = true;
    }
    EXPECT_TRUE(north && south) << n;
  }
  EXPECT_THROW(sphere_directions(5, 64), AmbientDimError);
  EXPECT_THROW(sphere_directions(1, 64), AmbientDimError);
}

TEST(Directions, HyperplaneScan) {
  const SurfaceEntry e = find_surface("hyperplane");
  const SurfaceMeasure mu = SurfaceMeasure::with_default_density(e.chart);
  const DirectionScan scan = direction_scan(mu, sphere_directions(3, 16), dyadic_rhos(4, 9));
  ASSERT_GE(scan.summary_index, 0);
  EXPECT_NEAR(scan.summary_slope, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(scan.fits[static_cast<std::size_t>(scan.summary_index)].direction[2]), 1.0, 1e-14);
  for (const DirectionFit& f : scan.fits)
    if (std::abs(f.direction[2]) < 0.9) EXPECT_LT(f.fit.slope, -2.0);
}

TEST(Directions, EarlyStopSkipsPastFloor) {
  const SurfaceEntry e = find_surface("hyperplane");
  const SurfaceMeasure mu = SurfaceMeasure::with_default_density(e.chart);
  Vec dir(3);
  dir << 1, 0, 0;
  const auto s = sample_along(mu, dir, dyadic_rhos(4, 12), 2);
  int skipped = 0;
  for (const auto& x : s) skipped += x.skipped;
  EXPECT_GT(skipped, 0);
}

TEST(Certificate, FlatHyperplane) {
  CertificateParams p;
  p.rho_max_exp = 9;
  p.mu_scan = false;
  const DimensionCertificate c = certificate(find_surface("hyperplane"), p);
  EXPECT_EQ(c.mode, "flat");
  EXPECT_EQ(c.k, 0);
  EXPECT_NEAR(c.nu_fit.slope, 0.0, 0.01);
  EXPECT_TRUE(c.pass) << c.reason;
  EXPECT_LE(c.dimension_lo, 0.0);
  EXPECT_GE(c.dimension_hi, 0.0);
}

TEST(Certificate, CircleArcFullRank) {
  CertificateParams p;
  p.rho_max_exp = 10;
  p.mu_scan = false;
  const DimensionCertificate c = certificate(find_surface("circle_arc"), p);
  EXPECT_EQ(c.mode, "full-rank");
  EXPECT_NEAR(c.nu_fit.slope, -0.5, 0.05);
  EXPECT_TRUE(c.pass);
}

TEST(Certificate, CylinderRuled) {
  CertificateParams p;
  p.rho_max_exp = 9;
  p.mu_scan = false;
  const DimensionCertificate c = certificate(find_surface("cylinder"), p);
  EXPECT_EQ(c.mode, "ruled");
  EXPECT_EQ(c.k, 1);
  EXPECT_TRUE(c.constancy.passed);
  EXPECT_NEAR(c.nu_fit.slope, -0.5, 0.05);
  EXPECT_TRUE(c.transfer_ok);
  for (const TransferCheck& t : c.transfer) EXPECT_LE(t.nu_abs, t.bound * (1.0 + 1e-9));
  EXPECT_TRUE(c.pass) << c.reason;
  EXPECT_LE(c.dimension_lo, 1.0);
  EXPECT_GE(c.dimension_hi, 1.0);
}

TEST(Certificate, WrongRankAnnotationIsRejected) {
  SurfaceEntry e = find_surface("cylinder");
  e.expected_rank = 2;
  EXPECT_THROW(certificate(e), RankMismatch);
}

TEST(Certificate, ControlSurfaceRunsAsFullRank) {
  CertificateParams p;
  p.rho_max_exp = 9;
  p.mu_scan = false;
  const DimensionCertificate c = certificate(find_surface("hyperboloid_control"), p);
  EXPECT_EQ(c.mode, "full-rank");
  EXPECT_EQ(c.k, 2);
  EXPECT_NEAR(c.nu_fit.slope, -1.0, 0.05);
}

TEST(ProductRule, CircleArcSquaredSmallScan) {
  auto a = std::make_shared<SurfaceMeasure>(
      SurfaceMeasure::with_default_density(find_surface("circle_arc").chart));
  const ProductRuleReport r = product_rule_check(a, a, 16, 4, 9);
  EXPECT_LT(r.factorization_error, 1e-10);
  EXPECT_TRUE(r.axis_ok);
  EXPECT_NEAR(r.summary_slope, -0.5, 0.05);
  EXPECT_TRUE(r.pass);
}
