#pragma once
// One-holed torus groups from trace triples, Coxeter extensions and the
// fundamental ideal triangle and quadrilateral.

#include <string>

#include "farey.hpp"
#include "hyperbolic.hpp"

namespace margulis {

template <class T = double>
struct FuchsianRep {
  Mat2<T> a, b;

  Mat2<T> c_sl2() const { return (a * b).inverse(); }
  Mat2<T> k_sl2() const { return a * b * a.inverse() * b.inverse(); }
  Mat3<T> A() const { return from_sl2(a); }
  Mat3<T> B() const { return from_sl2(b); }
  Mat3<T> C() const { return from_sl2(c_sl2()); }
  Mat3<T> K() const { return from_sl2(k_sl2()); }
  T x() const { return a.trace(); }
  T y() const { return b.trace(); }
  T z() const { return (a * b).trace(); }

  template <class U>
  FuchsianRep<U> cast() const { return {a.template cast<U>(), b.template cast<U>()}; }
};

template <class T>
T fricke_trace_k(T x, T y, T z) {
  return x * x + y * y + z * z - x * y * z - T(2);
}

template <class T>
FuchsianRep<T> rep_from_traces(T x, T y, T z, double tol = 1e-9) {
  using std::abs;
  using std::sqrt;
  if (!(x > T(2) && y > T(2) && z > T(2)))
    throw std::domain_error("rep_from_traces: traces must exceed 2");
  if (fricke_trace_k(x, y, z) > T(-2) + T(tol) * std::max(T(1), x * y * z))
    throw std::domain_error("rep_from_traces: x^2+y^2+z^2-xyz must be <= 0");
  const T lambda = (x + sqrt(x * x - T(4))) / T(2);
  const T p = (z - y / lambda) / (lambda - T(1) / lambda);
  const T s = y - p;
  const T off = p * s - T(1);
  if (abs(off) < T(1e-12)) throw std::domain_error("rep_from_traces: reducible pair");
  return {{lambda, T(0), T(0), T(1) / lambda}, {p, T(1), off, s}};
}

template <class T>
Mat2<T> letter_sl2(const FuchsianRep<T>& rep, char c) {
  switch (c) {
    case 'a': return rep.a;
    case 'A': return rep.a.inverse();
    case 'b': return rep.b;
    case 'B': return rep.b.inverse();
  }
  throw std::domain_error(std::string("invalid letter '") + c + "'");
}

template <class T>
Mat2<T> evaluate_word_sl2(const FuchsianRep<T>& rep, const std::string& w) {
  Mat2<T> r;
  for (char c : w) r = r * letter_sl2(rep, c);
  return r;
}

template <class T>
Mat3<T> evaluate_word(const FuchsianRep<T>& rep, const std::string& w) {
  return from_sl2(evaluate_word_sl2(rep, w));
}

template <class T>
FuchsianRep<T> rep_for_triple(const FuchsianRep<T>& rep, const BasicTriple& t) {
  return {evaluate_word_sl2(rep, t.A()), evaluate_word_sl2(rep, t.B())};
}

// Rotations by pi about t_i; A = i2 i0, B = i0 i1, C = i1 i2.
// lift[i] is a traceless SL(2,R) lift (lift^2 = -I) used for accurate products.
template <class T = double>
struct CoxeterExtension {
  FuchsianRep<T> rep;
  std::array<Mat3<T>, 3> iota;
  std::array<Vec3<T>, 3> t;
  std::array<Mat2<T>, 3> lift;

  Mat2<T> product_lift() const { return lift[0] * lift[1] * lift[2]; }
  Mat3<T> product() const { return iota[0] * iota[1] * iota[2]; }
};

namespace detail {
template <class T>
Mat2<T> traceless_part(Mat2<T> m) {
  m.a = (m.a - m.d) / T(2);
  m.d = -m.a;
  return m;
}
template <class T>
Mat2<T> lift_of_point(const Vec3<T>& t) {
  return sl2_matrix(t);  // squares to (t.t) I = -I for unit timelike t
}
}  // namespace detail

template <class T>
CoxeterExtension<T> coxeter_extension(const FuchsianRep<T>& rep) {
  const Vec3<T> a0 = neutral_vector_sl2(rep.a), b0 = neutral_vector_sl2(rep.b);
  const Vec3<T> c = cross(a0, b0);
  if (!(inner(c, c) < T(0))) throw std::domain_error("coxeter_extension: axes of A and B do not cross");
  CoxeterExtension<T> e;
  e.rep = rep;
  e.t[0] = unit_future_timelike(c);
  e.lift[0] = detail::lift_of_point(e.t[0]);
  e.lift[1] = detail::traceless_part(e.lift[0] * rep.b);
  e.lift[2] = detail::traceless_part(rep.a * e.lift[0]);
  for (int i = 1; i < 3; ++i) e.t[i] = unit_future_timelike(sl2_coords(e.lift[i]));
  for (int i = 0; i < 3; ++i) e.iota[i] = linear_involution(e.t[i]);
  return e;
}

// The fixed point rule for the ideal vertex n of the fundamental triangle.
enum class FixedPointChoice { plus, minus };

inline FixedPointChoice parse_choice(const std::string& s) {
  if (s == "plus") return FixedPointChoice::plus;
  if (s == "minus") return FixedPointChoice::minus;
  throw std::domain_error("fixed point choice must be 'plus' or 'minus'");
}

template <class T = double>
struct FixedPointCycle {
  Vec3<T> n;                      // z-normalized
  std::array<Vec3<T>, 4> cycle;   // n, i2 n, i1 i2 n, i0 i1 i2 n
  bool parabolic = false;
  T closure_residual{};
};

template <class T>
FixedPointCycle<T> fixed_point_cycle(const CoxeterExtension<T>& e,
                                     FixedPointChoice choice = FixedPointChoice::plus,
                                     double tol = 1e-9) {
  using std::abs;
  using std::sqrt;
  const Mat2<T> p = e.product_lift();
  const T h = p.trace() / T(2);
  const T disc = h * h - T(1);
  const T scale = std::max(T(1), h * h);
  if (disc < -T(tol) * scale) throw std::domain_error("fixed_point_cycle: product is elliptic");
  FixedPointCycle<T> out;
  T mu = h;
  if (disc > T(tol) * scale) {
    const T root = sqrt(disc);
    const T big = h > T(0) ? h + root : h - root;
    mu = choice == FixedPointChoice::plus ? big : T(1) / big;
  } else {
    out.parabolic = true;
  }
  auto [e1, e2] = detail::eigvec2(p, mu);
  out.n = z_normalized(detail::null_from_eigenvector(e1, e2));
  out.cycle[0] = out.n;
  out.cycle[1] = e.iota[2] * out.n;
  out.cycle[2] = e.iota[1] * out.cycle[1];
  out.cycle[3] = e.iota[0] * out.cycle[2];
  out.closure_residual = euclid_norm(euclid_cross(z_normalized(out.cycle[3]), out.n));
  return out;
}

// Cusps (n, i0 n, i2 n); side i carries t_i. The cross products
// s0 = n x i0n, s1 = i0n x i2n, s2 = i2n x n are multiplied by `orientation`
// (+1 or -1) so that the sides point away from the triangle.
template <class T = double>
struct PointedTriangle {
  IdealTriangle<T> tri;
  std::array<Vec3<T>, 3> cusp;  // n, i0 n, i2 n (unnormalized images of n)
  int orientation = 1;
};

template <class T>
PointedTriangle<T> fundamental_triangle(const CoxeterExtension<T>& e, const Vec3<T>& n) {
  PointedTriangle<T> out;
  out.cusp = {n, e.iota[0] * n, e.iota[2] * n};
  const T d = det3(out.cusp[0], out.cusp[1], out.cusp[2]);
  if (d == T(0)) throw std::domain_error("fundamental_triangle: degenerate cusps");
  // cross(v1, v2) . v3 = det3(v1, v2, v3) is the same for all three sides
  out.orientation = d > T(0) ? -1 : 1;
  const Vec3<T> raw[3] = {cross(out.cusp[0], out.cusp[1]), cross(out.cusp[1], out.cusp[2]),
                          cross(out.cusp[2], out.cusp[0])};
  for (int i = 0; i < 3; ++i) out.tri.sides[i] = T(out.orientation) * unit_spacelike(raw[i]);
  for (int i = 0; i < 3; ++i) out.tri.vertices[i] = z_normalized(out.cusp[i]);
  return out;
}

template <class T = double>
struct FundamentalQuadrilateral {
  PointedTriangle<T> delta;
  std::array<Vec3<T>, 3> flipped_sides;   // i0 applied to delta's sides
  std::array<Vec3<T>, 4> vertices;        // n, i2 n, i0 n, i0 i2 n (z-normalized)
  Vec3<T> hA_minus, hA_plus, hB_minus, hB_plus;  // outward unit normals
};

template <class T>
FundamentalQuadrilateral<T> fundamental_quadrilateral(const CoxeterExtension<T>& e,
                                                      const Vec3<T>& n) {
  FundamentalQuadrilateral<T> q;
  q.delta = fundamental_triangle(e, n);
  for (int i = 0; i < 3; ++i) q.flipped_sides[i] = e.iota[0] * q.delta.tri.sides[i];
  q.vertices = {z_normalized(n), z_normalized(e.iota[2] * n), z_normalized(e.iota[0] * n),
                z_normalized(e.iota[0] * (e.iota[2] * n))};
  // A = i2 i0 pairs the sides carried by i0 s2 and s2; B = i0 i1 pairs s1 and i0 s1.
  const Mat3<T> A = e.iota[2] * e.iota[0], B = e.iota[0] * e.iota[1];
  auto order = [](const Mat3<T>& g, const Vec3<T>& u, const Vec3<T>& v, Vec3<T>& minus, Vec3<T>& plus) {
    const Vec3<T> attract = fixed_ideal_points(g)[0];
    if (inner(attract, v) > inner(attract, u)) {
      minus = u;
      plus = v;
    } else {
      minus = v;
      plus = u;
    }
  };
  order(A, q.flipped_sides[2], q.delta.tri.sides[2], q.hA_minus, q.hA_plus);
  order(B, q.delta.tri.sides[1], q.flipped_sides[1], q.hB_minus, q.hB_plus);
  return q;
}

// (i0, i1, i2) -> (i0, i0 i2 i0, i1): the slot-2 flip of the basic triple.
template <class T>
CoxeterExtension<T> flip_involutions(const CoxeterExtension<T>& e) {
  CoxeterExtension<T> f;
  f.lift = {e.lift[0], e.lift[0] * e.lift[2] * e.lift[0].inverse(), e.lift[1]};
  f.lift[1] = detail::traceless_part(f.lift[1]);
  for (int i = 0; i < 3; ++i) {
    f.t[i] = unit_future_timelike(sl2_coords(f.lift[i]));
    f.iota[i] = linear_involution(f.t[i]);
  }
  f.rep = {f.lift[2] * f.lift[0], f.lift[0] * f.lift[1]};
  // lifts square to -I, so fix signs to match B^-1 and A
  if ((f.rep.a * e.rep.b).trace() < T(0)) f.rep.a = -f.rep.a;
  if ((f.rep.b * e.rep.a.inverse()).trace() < T(0)) f.rep.b = -f.rep.b;
  return f;
}

}  // namespace margulis
