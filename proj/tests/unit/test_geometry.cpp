#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fdim/catalog.hpp"
#include "fdim/geometry.hpp"
#include "oracles.hpp"

using namespace fdm;

namespace {

Vec random_point(const Box& box, std::mt19937_64& rng) {
  Vec p(box.dim());
  for (int a = 0; a < box.dim(); ++a) {
    std::uniform_real_distribution<double> u(box.axes[a].lo, box.axes[a].hi);
    p[a] = u(rng);
  }
  return p;
}

}  // namespace

TEST(Geometry, UnitNormalIsOrthogonalAndUnit) {
  std::mt19937_64 rng(11);
  for (const SurfaceEntry& e : catalog()) {
    const Chart chart = e.chart.chart();
    for (int i = 0; i < 100; ++i) {
      const Vec p = random_point(chart.domain(), rng);
      const Vec n = unit_normal(chart, p);
      const Mat J = chart.jacobian(p);
      EXPECT_NEAR(n.norm(), 1.0, 1e-12) << e.name;
      for (int j = 0; j < J.cols(); ++j) EXPECT_LT(std::abs(n.dot(J.col(j))), 1e-10) << e.name;
    }
  }
}

TEST(Geometry, NormalOrientation) {
  Mat cols(3, 2);
  cols << 1, 0, 0, 1, 0, 0;
  const Vec n = generalized_cross(cols);
  EXPECT_NEAR(n[2] * orientation_sign(n), 1.0, 0.0);
  Vec flat(3);
  flat << 0, -2, 0;
  EXPECT_EQ(orientation_sign(flat), -1.0);
}

TEST(Geometry, HelixSecondFundamentalForm) {
  const RuledChart rc = find_surface("helix_tangent").chart;
  const Chart chart = rc.chart();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Vec p = random_point(chart.domain(), rng);
    const double t = p[0], v = p[1];
    const double scale = std::sqrt(9 * t * t * t * t + 9 * t * t + 1);
    const Mat h = second_fundamental_form(chart, p) * scale;
    EXPECT_NEAR(h(0, 0), 6 * v, 1e-6);
    EXPECT_NEAR(h(0, 1), 0.0, 1e-6);
    EXPECT_NEAR(h(1, 0), 0.0, 1e-6);
    EXPECT_NEAR(h(1, 1), 0.0, 1e-6);
  }
}

TEST(Geometry, SecondFundamentalFormIsSymmetric) {
  std::mt19937_64 rng(3);
  for (const SurfaceEntry& e : catalog()) {
    const Chart chart = e.chart.chart();
    for (int i = 0; i < 20; ++i) {
      const Mat h = second_fundamental_form(chart, random_point(chart.domain(), rng));
      EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-9) << e.name;
    }
  }
}

TEST(Geometry, RankMatchesCatalogAnnotation) {
  std::mt19937_64 rng(5);
  for (const SurfaceEntry& e : catalog()) {
    const Chart chart = e.chart.chart();
    for (int i = 0; i < 100; ++i)
      EXPECT_EQ(rank_at(chart, random_point(chart.domain(), rng)), e.expected_rank) << e.name;
  }
}

TEST(Geometry, RankIsInvariantUnderReparametrization) {
  // p = q + 0.2 q^3 per axis, about the domain centre.
  std::mt19937_64 rng(17);
  for (const SurfaceEntry& e : catalog()) {
    const Chart chart = e.chart.chart();
    std::vector<oracle::AxisMap> maps;
    for (const Interval& iv : chart.domain().axes) {
      const double c = iv.center();
      oracle::AxisMap m;
      m.g = [c](double q) { return c + (q - c) + 0.2 * std::pow(q - c, 3); };
      m.dg = [c](double q) { return 1.0 + 0.6 * (q - c) * (q - c); };
      m.d2g = [c](double q) { return 1.2 * (q - c); };
      m.g_inverse = [m](double p) {
        double q = p;
        for (int it = 0; it < 60; ++it) q -= (m.g(q) - p) / m.dg(q);
        return q;
      };
      maps.push_back(m);
    }
    const Chart re = oracle::reparametrize(chart, maps);
    for (int i = 0; i < 30; ++i) {
      const Vec q = random_point(re.domain(), rng);
      Vec p(q.size());
      for (int a = 0; a < q.size(); ++a) p[a] = maps[static_cast<std::size_t>(a)].g(q[a]);
      EXPECT_EQ(rank_at(re, q), rank_at(chart, p)) << e.name;
      EXPECT_LT((re.eval(q) - chart.eval(p)).norm(), 1e-14);
    }
  }
}

TEST(Geometry, RuledConstancySeparatesControl) {
  for (const SurfaceEntry& e : catalog()) {
    const ConstancyReport r = check_ruled_constancy(e.chart);
    EXPECT_EQ(r.passed, !e.control) << e.name << " dev " << r.max_normal_deviation;
  }
}

TEST(Geometry, FiniteDifferencesMatchAnalyticDerivatives) {
  std::mt19937_64 rng(23);
  for (const SurfaceEntry& e : catalog()) {
    const Chart chart = e.chart.chart();
    ASSERT_TRUE(chart.has_analytic_derivatives()) << e.name;
    for (int i = 0; i < 20; ++i) {
      const Vec p = random_point(chart.domain(), rng);
      EXPECT_LT((chart.jacobian(p) - chart.jacobian_fd(p)).cwiseAbs().maxCoeff(), 1e-6) << e.name;
      const SecondPartials a = chart.hessian(p), b = chart.hessian_fd(p);
      for (int r = 0; r < chart.param_dim(); ++r)
        for (int c = 0; c < chart.param_dim(); ++c)
          EXPECT_LT((a(r, c) - b(r, c)).cwiseAbs().maxCoeff(), 1e-6) << e.name;
    }
  }
}

TEST(Geometry, CylinderCurvatures) {
  const Chart chart = find_surface("cylinder").chart.chart();
  Vec p(2);
  p << 0.1, 0.2;
  const ShapeReport r = shape_report(chart, p);
  EXPECT_EQ(r.rank, 1);
  std::vector<double> k = r.principal_curvatures;
  std::sort(k.begin(), k.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  EXPECT_NEAR(k[0], 0.0, 1e-12);
  EXPECT_NEAR(std::abs(k[1]), 1.0, 1e-10);
}

TEST(Geometry, SphereCurvaturesAreUnit) {
  const Chart chart = find_surface("sphere_patch").chart.chart();
  Vec p(2);
  p << 0.1, -0.2;
  for (double k : principal_curvatures(chart, p)) EXPECT_NEAR(std::abs(k), 1.0, 1e-10);
}

TEST(Geometry, RotationTakingIsProper) {
  Vec a(4), b(4);
  a << 1, 2, 0, -1;
  b << 0, 1, 1, 1;
  a.normalize();
  b.normalize();
  const Mat R = rotation_taking(a, b);
  EXPECT_LT((R * a - b).norm(), 1e-14);
  EXPECT_NEAR(R.determinant(), 1.0, 1e-13);
  EXPECT_LT((R.transpose() * R - Mat::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Geometry, TransformRuledPreservesRank) {
  const SurfaceEntry e = find_surface("helix_tangent");
  Vec to(3);
  to << 0.3, -0.4, 0.866;
  to.normalize();
  Vec e3 = Vec::Zero(3);
  e3[2] = 1;
  Vec shift(3);
  shift << 1, 2, 3;
  const RuledChart moved = transform_ruled(e.chart, rotation_taking(e3, to), shift);
  EXPECT_TRUE(check_ruled_constancy(moved).passed);
  for (const Vec& p : box_grid(moved.domain(), 4)) EXPECT_EQ(rank_at(moved.chart(), p), 1);
}

TEST(Geometry, BoxGridIncludesCorners) {
  const std::vector<Vec> g = box_grid(Box({{0, 1}, {2, 4}}), 3);
  ASSERT_EQ(g.size(), 9u);
  EXPECT_DOUBLE_EQ(g.front()[0], 0.0);
  EXPECT_DOUBLE_EQ(g.back()[1], 4.0);
}
