#include <gtest/gtest.h>

#include <margulis/hyperbolic.hpp>
#include <margulis/rng.hpp>

using namespace margulis;

namespace {

const Vec3<double> e1{1, 0, 0}, e3{0, 0, 1};

Mat2<double> random_sl2(CounterRng& r) {
  for (;;) {
    const double a = r.uniform(-2, 2), b = r.uniform(-2, 2), c = r.uniform(-2, 2);
    if (std::abs(a) < 0.2) continue;
    return {a, b, c, (1 + b * c) / a};
  }
}

bool same_ray(const Vec3<double>& u, const Vec3<double>& v, double tol = 1e-8) {
  return euclid_norm(euclid_cross(u, v)) <= tol * euclid_norm(u) * euclid_norm(v) &&
         (u.x * v.x + u.y * v.y + u.z * v.z) > 0;
}

bool is_lorentz(const Mat3<double>& m) {
  const Mat3<double> g{{{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}}};
  return max_abs_diff(m.transpose() * g * m, g) < 1e-8 && std::abs(m.det() - 1) < 1e-8;
}

}  // namespace

TEST(FromSl2, KernelAndDiagonal) {
  EXPECT_LT(max_abs_diff(from_sl2(Mat2<double>{}), Mat3<double>::identity()), 1e-15);
  EXPECT_LT(max_abs_diff(from_sl2(Mat2<double>{-1, 0, 0, -1}), Mat3<double>::identity()), 1e-15);
  const auto x = from_sl2(Mat2<double>{2, 0, 0, 0.5});
  const auto fx = x * e1;
  EXPECT_NEAR(fx.x, 1, 1e-12);
  EXPECT_NEAR(fx.y, 0, 1e-12);
  EXPECT_NEAR(fx.z, 0, 1e-12);
  // eigenvalues 1, 4, 1/4: trace 1 + 4 + 1/4
  EXPECT_NEAR(x.trace(), 5.25, 1e-12);
  EXPECT_NEAR(spectral_radius(x), 4, 1e-12);
  EXPECT_THROW(from_sl2(Mat2<double>{2, 0, 0, 1}), std::domain_error);
}

TEST(FromSl2, HomomorphismIntoSO21) {
  CounterRng r(21);
  for (int k = 0; k < 200; ++k) {
    const auto a = random_sl2(r), b = random_sl2(r);
    const auto fa = from_sl2(a);
    EXPECT_TRUE(is_lorentz(fa));
    EXPECT_GT((fa * e3).z, 0);  // future preserving
    EXPECT_LT(max_abs_diff(from_sl2(a * b), fa * from_sl2(b)), 1e-8 * std::max(1.0, max_abs(fa * from_sl2(b))));
  }
}

TEST(Classify, Isometries) {
  EXPECT_EQ(classify_isometry(from_sl2(Mat2<double>{2, 0, 0, 0.5})), IsometryClass::hyperbolic);
  EXPECT_EQ(classify_isometry(from_sl2(Mat2<double>{1, 1, 0, 1})), IsometryClass::parabolic);
  EXPECT_EQ(classify_isometry(Mat3<double>::identity()), IsometryClass::identity);
  const double c = std::cos(0.4), s = std::sin(0.4);
  EXPECT_EQ(classify_isometry(from_sl2(Mat2<double>{c, -s, s, c})), IsometryClass::elliptic);
}

// tr a = 2 cosh(l/2) gives spectral radius e^l for the adjoint matrix.
TEST(Classify, TraceCorrespondence) {
  for (double l : {0.1, 0.7, 2.0, 5.0}) {
    const double h = std::cosh(l / 2);
    const Mat2<double> a{h + std::sinh(l / 2), 0.3, 0, 0};
    Mat2<double> g = a;
    g.d = 2 * h - g.a;
    g.c = (g.a * g.d - 1) / g.b;
    EXPECT_NEAR(spectral_radius(from_sl2(g)), std::exp(l), 1e-8 * std::exp(l));
  }
}

TEST(NeutralVector, DiagonalExample) {
  const auto x = from_sl2(Mat2<double>{2, 0, 0, 0.5});
  const auto v = neutral_vector(x);
  EXPECT_NEAR(std::abs(v.x), 1, 1e-12);
  EXPECT_NEAR(v.y, 0, 1e-12);
  EXPECT_NEAR(v.z, 0, 1e-12);
  EXPECT_GT(det3(e3, x * e3, v), 0);
  const auto w = neutral_vector(lorentz_inverse(x));
  EXPECT_NEAR(w.x, -v.x, 1e-12);
  const double c = std::cos(0.4), s = std::sin(0.4);
  EXPECT_THROW(neutral_vector(from_sl2(Mat2<double>{c, -s, s, c})), std::domain_error);
  EXPECT_THROW(neutral_vector(Mat3<double>::identity()), std::domain_error);
}

TEST(NeutralVector, FixedUnitAndProbeIndependent) {
  CounterRng r(22);
  int n = 0;
  while (n < 100) {
    const auto g = random_sl2(r);
    if (std::abs(g.trace()) < 2.2) continue;
    ++n;
    const auto x = from_sl2(g);
    const auto v = neutral_vector(x);
    EXPECT_NEAR(inner(v, v), 1, 1e-9);
    EXPECT_LT(max_abs(Vec3<double>(x * v - v)), 1e-8 * std::max(1.0, max_abs(x)));
    const auto via_lift = neutral_vector_sl2(g);
    EXPECT_LT(max_abs(Vec3<double>(via_lift - v)), 1e-8);
    for (int k = 0; k < 20; ++k) {
      const Vec3<double> u = unit_future_timelike(Vec3<double>{r.uniform(-1, 1), r.uniform(-1, 1), 2});
      EXPECT_GT(det3(u, x * u, v), 0);
    }
  }
}

TEST(FixedIdealPoints, HyperbolicAndParabolic) {
  const auto x = from_sl2(Mat2<double>{2, 0, 0, 0.5});
  const auto pts = fixed_ideal_points(x);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_LT(euclid_norm(Vec3<double>(x * pts[0] - 4.0 * pts[0])), 1e-9);
  EXPECT_LT(euclid_norm(Vec3<double>(x * pts[1] - 0.25 * pts[1])), 1e-9);
  EXPECT_NEAR(std::abs(pts[0].y), 1, 1e-12);
  EXPECT_NEAR(pts[0].y, -pts[1].y, 1e-12);

  const auto par = fixed_ideal_points(from_sl2(Mat2<double>{1, 1, 0, 1}));
  ASSERT_EQ(par.size(), 1u);
  EXPECT_NEAR(inner(par[0], par[0]), 0, 1e-12);
  EXPECT_LT(euclid_norm(Vec3<double>(from_sl2(Mat2<double>{1, 1, 0, 1}) * par[0] - par[0])), 1e-12);
}

TEST(FixedIdealPoints, Equivariance) {
  CounterRng r(23);
  int n = 0;
  while (n < 100) {
    const auto g = random_sl2(r), y = random_sl2(r);
    if (std::abs(g.trace()) < 2.2) continue;
    ++n;
    const auto X = from_sl2(g), Y = from_sl2(y);
    const auto pts = fixed_ideal_points(X);
    const auto conj = fixed_ideal_points(Y * X * lorentz_inverse(Y));
    for (int i = 0; i < 2; ++i) EXPECT_TRUE(same_ray(conj[i], Y * pts[i], 1e-6));
  }
}

TEST(IdealTriangle, FromCuspsExample) {
  const auto t = ideal_triangle_from_cusps(Vec3<double>{1, 0, 1}, Vec3<double>{-1, 0, 1}, Vec3<double>{0, 1, 1});
  const Vec3<double> want[3] = {{0, -1, 0}, {1, 1, 1}, {-1, 1, 1}};
  for (int i = 0; i < 3; ++i) EXPECT_LT(max_abs(Vec3<double>(t.sides[i] - want[i])), 1e-12);
  const Mat3<double> g{{{{1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}}};
  EXPECT_LT(max_abs_diff(gram(t.sides), g), 1e-12);
  EXPECT_THROW(ideal_triangle_from_cusps(Vec3<double>{1, 0, 1}, Vec3<double>{1, 0, 1}, Vec3<double>{0, 1, 1}),
               std::domain_error);
}

TEST(IdealTriangle, GramOfRandomTriangles) {
  CounterRng r(24);
  const Mat3<double> g{{{{1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}}};
  for (int k = 0; k < 50; ++k) {
    double th[3];
    for (double& t : th) t = r.uniform(0, 2 * M_PI);
    std::sort(th, th + 3);
    if (th[1] - th[0] < 0.3 || th[2] - th[1] < 0.3 || 2 * M_PI - th[2] + th[0] < 0.3) continue;
    const auto t = ideal_triangle_from_cusps(Vec3<double>{std::cos(th[0]), std::sin(th[0]), 1},
                                             Vec3<double>{std::cos(th[1]), std::sin(th[1]), 1},
                                             Vec3<double>{std::cos(th[2]), std::sin(th[2]), 1});
    EXPECT_LT(max_abs_diff(gram(t.sides), g), 1e-8);
    for (const auto& s : t.sides) EXPECT_LT(inner(t.vertices[0] + t.vertices[1] + t.vertices[2], s), 0);
  }
}

TEST(Halfplane, Membership) {
  const Halfplane<double> h{e1};
  EXPECT_TRUE(halfplane_contains(h, Vec3<double>{1, 0, 2}));
  EXPECT_FALSE(halfplane_contains(h, Vec3<double>{-1, 0, 2}));
  EXPECT_TRUE(halfplane_contains(h, Vec3<double>{0, 0, 1}));
  EXPECT_THROW(halfplane_contains(h, Vec3<double>{1, 0, 0}), std::domain_error);
}
