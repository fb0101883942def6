#include <gtest/gtest.h>

#include <cmath>

#include "fdim/errors.hpp"
#include "fdim/morse.hpp"

using namespace fdm;

namespace {

const MorsePhase& example(const std::string& name) {
  static const std::vector<MorsePhase> all = morse_examples();
  for (const auto& m : all)
    if (m.name == name) return m;
  throw std::runtime_error("missing example " + name);
}

MorseNormalization normalize(const MorsePhase& p) { return morse_normalize(p.f, p.hessian, p.z0); }

}  // namespace

TEST(Morse, ExamplesReconstruct) {
  for (const MorsePhase& p : morse_examples()) {
    const MorseNormalization m = normalize(p);
    EXPECT_LT(m.max_reconstruction_error(), 1e-8) << p.name;
    EXPECT_LT(m.identity_residual(), 1e-6) << p.name;
    EXPECT_GE(m.half_width(), 1e-4) << p.name;
  }
}

TEST(Morse, SaddleIsIdentity) {
  const MorseNormalization m = normalize(example("saddle"));
  EXPECT_EQ(m.n(), 2);
  EXPECT_EQ(m.m(), 1);
  Vec x(2);
  x << 0.3, -0.2;
  const Vec y = m.tau(x);
  EXPECT_NEAR(std::abs(y[0]), 0.3, 1e-12);
  EXPECT_NEAR(std::abs(y[1]), 0.2, 1e-12);
  EXPECT_NEAR(m.q(y), 0.09 - 0.04, 1e-12);
}

TEST(Morse, CubicHasClosedForm) {
  const MorseNormalization m = normalize(example("cubic"));
  EXPECT_EQ(m.n(), 1);
  EXPECT_EQ(m.m(), 1);
  for (double x : {-0.45, -0.2, 0.1, 0.4}) {
    Vec v(1);
    v << x;
    EXPECT_NEAR(std::abs(m.tau(v)[0]), std::abs(x) * std::sqrt(1.0 + x), 1e-12);
  }
}

TEST(Morse, HelixJacobianIsSqrtThree) {
  const MorseNormalization m = normalize(example("helix"));
  EXPECT_EQ(m.m(), 1);
  EXPECT_NEAR(std::abs(m.jacobian_at_origin()(0, 0)), std::sqrt(3.0), 1e-8);
}

TEST(Morse, JacobianMatchesDifferences) {
  const MorseNormalization m = normalize(example("saddle"));
  Vec x(2);
  x << 0.1, 0.15;
  const Mat J = m.jacobian(x);
  const double h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    Vec a = x, b = x;
    a[j] += h;
    b[j] -= h;
    const Vec col = (m.tau(a) - m.tau(b)) / (2 * h);
    EXPECT_LT((col - J.col(j)).norm(), 1e-6);
  }
}

TEST(Morse, ThreeDimensionalCoupledPhase) {
  auto f = [](const Vec& z) {
    return z[0] * z[0] + z[0] * z[1] - 2 * z[1] * z[1] + z[2] * z[2] + 0.3 * z[0] * z[1] * z[2] +
           0.1 * z[2] * z[2] * z[2];
  };
  auto h = [](const Vec& z) {
    Mat H(3, 3);
    H << 2, 1 + 0.3 * z[2], 0.3 * z[1], 1 + 0.3 * z[2], -4, 0.3 * z[0], 0.3 * z[1], 0.3 * z[0],
        2 + 0.6 * z[2];
    return H;
  };
  const MorseNormalization m = morse_normalize(f, h, Vec::Zero(3));
  EXPECT_EQ(m.m(), 2);
  EXPECT_LT(m.max_reconstruction_error(), 1e-8);
  EXPECT_LT(m.identity_residual(), 1e-6);
}

TEST(Morse, DegenerateAndCollapsingInputs) {
  auto cube = [](const Vec& z) { return z[0] * z[0] * z[0]; };
  auto cube_h = [](const Vec& z) {
    Mat H(1, 1);
    H << 6 * z[0];
    return H;
  };
  EXPECT_THROW(morse_normalize(cube, cube_h, Vec::Zero(1)), DegenerateCritical);
  // x^2 + 1e8 x^3: the square root exists only for x > -1e-8.
  auto steep = [](const Vec& z) { return z[0] * z[0] + 1e8 * z[0] * z[0] * z[0]; };
  auto steep_h = [](const Vec& z) {
    Mat H(1, 1);
    H << 2 + 6e8 * z[0];
    return H;
  };
  EXPECT_THROW(morse_normalize(steep, steep_h, Vec::Zero(1)), ValidityCollapse);
}
