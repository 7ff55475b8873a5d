#include <gtest/gtest.h>

#include <margulis/lorentz.hpp>
#include <margulis/rng.hpp>

using namespace margulis;

namespace {

const Vec3<double> e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};

void expect_vec(const Vec3<double>& got, const Vec3<double>& want, double tol = 1e-12) {
  EXPECT_NEAR(got.x, want.x, tol);
  EXPECT_NEAR(got.y, want.y, tol);
  EXPECT_NEAR(got.z, want.z, tol);
}

Vec3<double> random_vec(CounterRng& r) { return {r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)}; }

}  // namespace

TEST(Inner, BasisAndDiagonal) {
  EXPECT_EQ(inner(e1, e1), 1);
  EXPECT_EQ(inner(e3, e3), -1);
  EXPECT_EQ(inner(Vec3<double>{1, 1, 1}, Vec3<double>{1, 1, 1}), 1);
}

TEST(Det3, OrientationAndAlternation) {
  EXPECT_EQ(det3(e1, e2, e3), 1);
  EXPECT_EQ(det3(e2, e1, e3), -1);
  EXPECT_EQ(det3(e1, e1, e3), 0);
}

TEST(Cross, BasisValues) {
  expect_vec(cross(e1, e2), {0, 0, -1});
  expect_vec(cross(e2, e3), {1, 0, 0});
  const Vec3<double> u{0.3, -1.2, 2.5};
  expect_vec(cross(u, u), {0, 0, 0});
}

// The defining property, checked against every basis functional.
TEST(Cross, RepresentsDeterminant) {
  CounterRng r(11);
  for (int k = 0; k < 1000; ++k) {
    const auto u = random_vec(r), v = random_vec(r), w = random_vec(r);
    EXPECT_NEAR(inner(cross(u, v), w), det3(u, v, w), 1e-12);
    EXPECT_NEAR(inner(cross(u, v), u), 0, 1e-12);
    EXPECT_NEAR(inner(cross(u, v), v), 0, 1e-12);
  }
}

TEST(Cross, LagrangeIdentity) {
  CounterRng r(12);
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto u1 = random_vec(r), v1 = random_vec(r), u2 = random_vec(r), v2 = random_vec(r);
    const double lhs = inner(cross(u1, v1), cross(u2, v2)) + inner(u1, u2) * inner(v1, v2) -
                       inner(u1, v2) * inner(v1, u2);
    worst = std::max(worst, std::abs(lhs));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Classify, CausalCharacter) {
  EXPECT_EQ(classify(Vec3<double>{0, 0, 1}), CausalClass::timelike_future);
  EXPECT_EQ(classify(Vec3<double>{0, 1, 1}), CausalClass::null_future);
  EXPECT_EQ(classify(Vec3<double>{1, 0, 0}), CausalClass::spacelike);
  EXPECT_EQ(classify(Vec3<double>{0, 0, -2}), CausalClass::timelike_past);
  EXPECT_EQ(classify(Vec3<double>{1, 0, -1}), CausalClass::null_past);
  EXPECT_EQ(classify(Vec3<double>{0, 0, 0}), CausalClass::zero);
}

TEST(NullFrame, LabelsFollowOrientation) {
  const auto f = null_frame(e1);
  expect_vec(f.s_plus, {0, 1, 1});
  expect_vec(f.s_minus, {0, -1, 1});
  const auto g = null_frame(Vec3<double>{-1, 0, 0});
  expect_vec(g.s_plus, {0, -1, 1});
  expect_vec(g.s_minus, {0, 1, 1});
  EXPECT_THROW(null_frame(e3), std::domain_error);
}

TEST(NullFrame, InvariantsAndRoundTrip) {
  CounterRng r(13);
  int n = 0;
  while (n < 500) {
    const auto v = random_vec(r);
    if (inner(v, v) < 0.05) continue;
    ++n;
    const auto f = null_frame(v);
    EXPECT_NEAR(inner(f.s, f.s), 1, 1e-9);
    EXPECT_NEAR(inner(f.s, f.s_plus), 0, 1e-9);
    EXPECT_NEAR(inner(f.s, f.s_minus), 0, 1e-9);
    EXPECT_NEAR(inner(f.s_plus, f.s_plus), 0, 1e-9);
    EXPECT_NEAR(inner(f.s_minus, f.s_minus), 0, 1e-9);
    EXPECT_DOUBLE_EQ(f.s_plus.z, 1);
    EXPECT_DOUBLE_EQ(f.s_minus.z, 1);
    const auto c = cross(f.s_plus, f.s_minus);
    const double lam = inner(c, f.s);
    ASSERT_GT(lam, 0);
    const auto back = c / lam;
    expect_vec(back, f.s, 1e-9);
  }
}

TEST(LinearInvolution, FormulaAndErrors) {
  expect_vec(linear_involution(e3) * Vec3<double>{1, 2, 5}, {-1, -2, 5});
  expect_vec(linear_involution(e1) * e1, e1);
  EXPECT_THROW(linear_involution(Vec3<double>{0, 1, 1}), std::domain_error);
}

TEST(LinearInvolution, IsometricInvolution) {
  CounterRng r(14);
  for (int k = 0; k < 200; ++k) {
    const auto u = random_vec(r);
    if (std::abs(inner(u, u)) < 0.05) continue;
    const auto m = linear_involution(u);
    EXPECT_LT(max_abs_diff(m * m, Mat3<double>::identity()), 1e-9);
    expect_vec(m * u, u, 1e-9);
    const auto v = random_vec(r), w = random_vec(r);
    EXPECT_NEAR(inner(m * v, m * w), inner(v, w), 1e-9);
  }
}

TEST(ParticleInvolution, RotationAboutParticle) {
  const auto g = particle_involution(Point<double>{}, e3);
  expect_vec(g(Point<double>{{0.5, -2, 3}}).c, {-0.5, 2, 3});

  CounterRng r(15);
  const Point<double> p{random_vec(r)};
  const Vec3<double> t = unit_future_timelike(Vec3<double>{0.3, -0.4, 2});
  const auto h = particle_involution(p, t);
  expect_vec(h(p).c, p.c, 1e-12);
  expect_vec(h(p + 2.5 * t).c, (p + 2.5 * t).c, 1e-12);
  for (int k = 0; k < 100; ++k) {
    const Point<double> x{random_vec(r)};
    expect_vec(h(h(x)).c, x.c, 1e-12);
  }
  EXPECT_THROW(particle_involution(p, Vec3<double>{0, 0, 2}), std::domain_error);
}

TEST(AffineMap, LorentzInverse) {
  CounterRng r(16);
  const auto a = particle_involution(Point<double>{random_vec(r)}, unit_future_timelike(Vec3<double>{0.1, 0.2, 1}));
  const auto b = particle_involution(Point<double>{random_vec(r)}, unit_future_timelike(Vec3<double>{-0.5, 0.3, 1}));
  const auto g = a * b;
  const auto id = g * g.inverse();
  EXPECT_LT(max_abs_diff(id.lin, Mat3<double>::identity()), 1e-12);
  EXPECT_LT(max_abs(id.trans), 1e-12);
}
