#include <gtest/gtest.h>

#include <margulis/surface_group.hpp>

using namespace margulis;

namespace {

double mat_err(const Mat3<double>& a, const Mat3<double>& b) {
  return max_abs_diff(a, b) / std::max(1.0, max_abs(b));
}

double ray_err(const Vec3<double>& u, const Vec3<double>& v) {
  return euclid_norm(euclid_cross(z_normalized(u), z_normalized(v)));
}

}  // namespace

TEST(FuchsianRep, ModularTorusTraces) {
  EXPECT_EQ(fricke_trace_k(3.0, 3.0, 3.0), -2.0);
  const auto rep = rep_from_traces(3.0, 3.0, 3.0);
  EXPECT_NEAR(rep.x(), 3, 1e-12);
  EXPECT_NEAR(rep.y(), 3, 1e-12);
  EXPECT_NEAR(rep.z(), 3, 1e-12);
  EXPECT_NEAR(rep.k_sl2().trace(), -2, 1e-9);
  EXPECT_EQ(classify_isometry(rep.K()), IsometryClass::parabolic);
  for (const auto& m : {rep.A(), rep.B(), rep.C()}) EXPECT_EQ(classify_isometry(m), IsometryClass::hyperbolic);
}

// Independent integer fixture with the same traces.
TEST(FuchsianRep, IntegerFixture) {
  const Mat2<double> a{1, 1, 1, 2}, b{1, -1, -1, 2};
  EXPECT_EQ((a * b).trace(), 3);
  EXPECT_EQ((a * b * a.inverse() * b.inverse()).trace(), -2);
}

TEST(FuchsianRep, RejectsNonFuchsianTraces) {
  EXPECT_THROW(rep_from_traces(2.1, 2.1, 2.1), std::domain_error);
  EXPECT_THROW(rep_from_traces(1.5, 3.0, 3.0), std::domain_error);
}

TEST(FuchsianRep, HyperbolicBoundary) {
  const auto rep = rep_from_traces(3.0, 3.5, 4.0);
  EXPECT_NEAR(rep.k_sl2().trace(), 9 + 12.25 + 16 - 42 - 2, 1e-9);
  EXPECT_EQ(classify_isometry(rep.K()), IsometryClass::hyperbolic);
}

TEST(Words, Evaluation) {
  const auto rep = rep_from_traces(3.0, 3.0, 3.0);
  EXPECT_LT(mat_err(evaluate_word(rep, ""), Mat3<double>::identity()), 1e-15);
  EXPECT_LT(mat_err(evaluate_word(rep, "abAB"), rep.K()), 1e-12);
  for (const auto& [u, v] : std::vector<std::pair<std::string, std::string>>{{"ab", "BAb"}, {"aab", "Ba"}, {"bA", "abab"}})
    EXPECT_LT(mat_err(evaluate_word(rep, u + v), evaluate_word(rep, u) * evaluate_word(rep, v)), 1e-10);
}

class Coxeter : public ::testing::TestWithParam<std::array<double, 3>> {};

TEST_P(Coxeter, Relations) {
  const auto [x, y, z] = GetParam();
  const auto rep = rep_from_traces(x, y, z);
  const auto e = coxeter_extension(rep);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(mat_err(e.iota[i] * e.iota[i], Mat3<double>::identity()), 1e-8);
    EXPECT_NEAR(inner(e.t[i], e.t[i]), -1, 1e-9);
    EXPECT_GT(e.t[i].z, 0);
  }
  EXPECT_LT(mat_err(e.iota[2] * e.iota[0], rep.A()), 1e-8);
  EXPECT_LT(mat_err(e.iota[0] * e.iota[1], rep.B()), 1e-8);
  EXPECT_LT(mat_err(e.iota[1] * e.iota[2], rep.C()), 1e-8);
  // t1 lies on the axes of B and C
  const auto t1 = unit_future_timelike(cross(neutral_vector_sl2(rep.b), neutral_vector_sl2(rep.c_sl2())));
  EXPECT_LT(max_abs(Vec3<double>(t1 - e.t[1])), 1e-8);
  const auto p = e.iota[2] * e.iota[1] * e.iota[0];
  EXPECT_LT(mat_err(p * p, rep.K()), 1e-8);
}

TEST_P(Coxeter, FundamentalTriangle) {
  const auto [x, y, z] = GetParam();
  const auto e = coxeter_extension(rep_from_traces(x, y, z));
  const auto cyc = fixed_point_cycle(e);
  EXPECT_LT(cyc.closure_residual, 1e-8);
  EXPECT_LT(ray_err(e.iota[0] * (e.iota[1] * (e.iota[2] * cyc.n)), cyc.n), 1e-8);
  const auto tri = fundamental_triangle(e, cyc.n);
  const Mat3<double> g{{{{1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}}};
  EXPECT_LT(max_abs_diff(gram(tri.tri.sides), g), 1e-8);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(inner(e.t[i], tri.tri.sides[i]), 0, 1e-8);
  // side 0 joins n and i0 n
  EXPECT_NEAR(inner(tri.tri.sides[0], cyc.n), 0, 1e-8);
  EXPECT_NEAR(inner(tri.tri.sides[0], z_normalized(e.iota[0] * cyc.n)), 0, 1e-8);
}

TEST_P(Coxeter, FundamentalQuadrilateral) {
  const auto [x, y, z] = GetParam();
  const auto rep = rep_from_traces(x, y, z);
  const auto e = coxeter_extension(rep);
  const auto n = fixed_point_cycle(e).n;
  const auto q = fundamental_quadrilateral(e, n);
  EXPECT_LT(ray_err(q.vertices[0], n), 1e-12);
  EXPECT_LT(ray_err(q.vertices[1], e.iota[2] * n), 1e-12);
  EXPECT_LT(ray_err(q.vertices[2], e.iota[0] * n), 1e-12);
  EXPECT_LT(ray_err(q.vertices[3], e.iota[0] * (e.iota[2] * n)), 1e-12);
  // A and B carry one side geodesic onto the other
  const auto A = rep.A(), B = rep.B();
  for (double t : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    const auto fa = null_frame(q.hA_minus), fb = null_frame(q.hB_minus);
    const Vec3<double> pa = fa.s_plus * std::exp(t) + fa.s_minus * std::exp(-t);
    const Vec3<double> pb = fb.s_plus * std::exp(t) + fb.s_minus * std::exp(-t);
    EXPECT_NEAR(inner(A * pa, q.hA_plus) / euclid_norm(A * pa), 0, 1e-7);
    EXPECT_NEAR(inner(B * pb, q.hB_plus) / euclid_norm(B * pb), 0, 1e-7);
  }
  // attracting points lie beyond the plus sides
  EXPECT_GT(inner(fixed_ideal_points(A)[0], q.hA_plus), inner(fixed_ideal_points(A)[0], q.hA_minus));
  EXPECT_GT(inner(fixed_ideal_points(B)[0], q.hB_plus), inner(fixed_ideal_points(B)[0], q.hB_minus));
}

TEST_P(Coxeter, FlipInvolutions) {
  const auto [x, y, z] = GetParam();
  const auto rep = rep_from_traces(x, y, z);
  const auto e = coxeter_extension(rep);
  const auto f = flip_involutions(e);
  for (int i = 0; i < 3; ++i) EXPECT_LT(mat_err(f.iota[i] * f.iota[i], Mat3<double>::identity()), 1e-8);
  EXPECT_LT(mat_err(f.iota[1], e.iota[0] * e.iota[2] * e.iota[0]), 1e-8);
  EXPECT_LT(mat_err(f.iota[2] * f.iota[0], lorentz_inverse(rep.B())), 1e-8);
  EXPECT_LT(mat_err(from_sl2(f.rep.a), lorentz_inverse(rep.B())), 1e-8);
  EXPECT_LT(mat_err(from_sl2(f.rep.b), rep.A()), 1e-8);
  // flipping twice conjugates the original triple by i0: the same group
  const auto g = flip_involutions(f);
  for (int i = 0; i < 3; ++i) EXPECT_LT(mat_err(g.iota[i], e.iota[0] * e.iota[i] * e.iota[0]), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Traces, Coxeter,
                         ::testing::Values(std::array<double, 3>{3, 3, 3}, std::array<double, 3>{3, 3.5, 4},
                                           std::array<double, 3>{4, 4, 4}));

TEST(FixedPointCycle, Choice) {
  const auto par = coxeter_extension(rep_from_traces(3.0, 3.0, 3.0));
  const auto p1 = fixed_point_cycle(par, FixedPointChoice::plus), p2 = fixed_point_cycle(par, FixedPointChoice::minus);
  EXPECT_TRUE(p1.parabolic);
  EXPECT_LT(ray_err(p1.n, p2.n), 1e-12);

  const auto hyp = coxeter_extension(rep_from_traces(3.0, 3.5, 4.0));
  const auto h1 = fixed_point_cycle(hyp, FixedPointChoice::plus), h2 = fixed_point_cycle(hyp, FixedPointChoice::minus);
  EXPECT_FALSE(h1.parabolic);
  EXPECT_GT(ray_err(h1.n, h2.n), 1e-3);
  EXPECT_LT(h2.closure_residual, 1e-8);
  EXPECT_THROW(parse_choice("both"), std::domain_error);
}
