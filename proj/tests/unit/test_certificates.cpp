#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fdim/analysis.hpp"
#include "fdim/catalog.hpp"
#include "oracles.hpp"

using namespace fdm;

namespace {

DimensionCertificate run(const std::string& name, int rho_max) {
  CertificateParams p;
  p.rho_max_exp = rho_max;
  p.mu_scan = false;
  return certificate(find_surface(name), p);
}

class CatalogCertificate : public ::testing::TestWithParam<const char*> {};

}  // namespace

// Widening the range must not move the slope: the fits sit in the asymptotic regime.
TEST_P(CatalogCertificate, StableUnderWiderRange) {
  const DimensionCertificate narrow = run(GetParam(), 9);
  const DimensionCertificate wide = run(GetParam(), 12);
  EXPECT_TRUE(wide.pass) << wide.reason;
  EXPECT_LT(std::abs(wide.nu_fit.slope - narrow.nu_fit.slope), 0.03)
      << narrow.nu_fit.slope << " -> " << wide.nu_fit.slope;
  EXPECT_NEAR(wide.nu_fit.slope, -0.5 * wide.k, 0.05);
  for (const TransferCheck& t : wide.transfer) EXPECT_TRUE(t.holds) << t.rho;
}

INSTANTIATE_TEST_SUITE_P(Catalog, CatalogCertificate,
                         ::testing::Values("hyperplane", "cylinder", "light_cone", "circle_arc",
                                           "sphere_patch", "hyperboloid_control", "helix_tangent",
                                           "perturbed_helix", "moment_curve_tangent"),
                         [](const auto& info) { return std::string(info.param); });

class AveragingIdentity : public ::testing::TestWithParam<const char*> {};

TEST_P(AveragingIdentity, MatchesDirectIntegral) {
  const SurfaceEntry e = find_surface(GetParam());
  const AveragedMeasure nu = AveragedMeasure::with_default_psi(
      SurfaceMeasure::with_default_density(e.chart, e.density_inner, e.density_outer),
      e.density_inner, e.density_outer);
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> u(16.0, 256.0);
  for (int i = 0; i < 20; ++i) {
    const double rho = u(rng);
    const double a = std::abs(averaged_fourier(nu, rho));
    const double b = std::abs(oracle::averaged_direct(nu, rho));
    EXPECT_LE(std::abs(a - b), 1e-4 * b) << "rho " << rho;
  }
}

INSTANTIATE_TEST_SUITE_P(Catalog, AveragingIdentity,
                         ::testing::Values("helix_tangent", "perturbed_helix"),
                         [](const auto& info) { return std::string(info.param); });
