#pragma once
// Hyperboloid model of H^2, SO(2,1) isometries and their SL(2,R) lifts.

#include <algorithm>
#include <utility>
#include <vector>

#include "lorentz.hpp"

namespace margulis {

template <class T = double>
struct Mat2 {
  T a{1}, b{0}, c{0}, d{1};

  T det() const { return a * d - b * c; }
  T trace() const { return a + d; }
  Mat2 inverse() const { return {d, -b, -c, a}; }  // unimodular only

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator-(const Mat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }
  template <class U>
  Mat2<U> cast() const { return {U(a), U(b), U(c), U(d)}; }
};

// Coordinates of a traceless matrix [[p,q],[r,-p]] in the basis E1, E2, E3.
template <class T>
Vec3<T> sl2_coords(const Mat2<T>& x) {
  return {(x.a - x.d) / T(2), (x.b + x.c) / T(2), (x.b - x.c) / T(2)};
}

template <class T>
Mat2<T> sl2_matrix(const Vec3<T>& v) {
  return {v.x, v.y + v.z, v.y - v.z, -v.x};
}

template <class T>
Mat3<T> from_sl2(const Mat2<T>& g, double tol = kEps) {
  using std::abs;
  if (abs(g.det() - T(1)) > T(tol)) throw std::domain_error("from_sl2: determinant is not 1");
  const Mat2<T> gi = g.inverse();
  const Vec3<T> basis[3] = {{T(1), T(0), T(0)}, {T(0), T(1), T(0)}, {T(0), T(0), T(1)}};
  Mat3<T> r;
  for (int j = 0; j < 3; ++j) {
    const Vec3<T> col = sl2_coords(g * sl2_matrix(basis[j]) * gi);
    for (int i = 0; i < 3; ++i) r(i, j) = col[i];
  }
  return r;
}

enum class IsometryClass { identity, elliptic, parabolic, hyperbolic };

inline const char* to_string(IsometryClass c) {
  switch (c) {
    case IsometryClass::identity: return "identity";
    case IsometryClass::elliptic: return "elliptic";
    case IsometryClass::parabolic: return "parabolic";
    case IsometryClass::hyperbolic: return "hyperbolic";
  }
  return "?";
}

// The characteristic polynomial is (l-1)(l^2-(t-1)l+1), so the trace decides.
// Near t = 3 the spectral radius is 1 + sqrt(t-3); a trace tolerance is far
// more stable than a numerical eigenvalue.
template <class T>
IsometryClass classify_isometry(const Mat3<T>& x, double tol = 1e-9) {
  const T scale = std::max(T(1), max_abs(x));
  if (max_abs_diff(x, Mat3<T>::identity()) <= T(tol) * scale) return IsometryClass::identity;
  const T t = x.trace();
  if (t > T(3) + T(tol) * scale) return IsometryClass::hyperbolic;
  if (t >= T(3) - T(tol) * scale) return IsometryClass::parabolic;
  return IsometryClass::elliptic;
}

template <class T>
T spectral_radius(const Mat3<T>& x) {
  using std::sqrt;
  const T h = (x.trace() - T(1)) / T(2);
  if (h <= T(1)) return T(1);
  return h + sqrt(h * h - T(1));
}

namespace detail {

// Kernel direction of a rank-2 matrix from the best-conditioned pair of rows.
template <class T>
Vec3<T> kernel_rank2(const Mat3<T>& m) {
  Vec3<T> best{};
  T bn(-1);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const Vec3<T> c = euclid_cross(m.row(i), m.row(j));
      const T n = euclid_norm(c);
      if (n > bn) { bn = n; best = c; }
    }
  if (!(bn > T(0))) throw std::domain_error("kernel_rank2: matrix has rank < 2");
  return best / bn;
}

template <class T>
Vec3<T> fix_neutral_sign(const Mat3<T>& x, Vec3<T> v, const Vec3<T>& probe) {
  if (det3(probe, x * probe, v) < T(0)) v = -v;
  return v;
}

// Null vector of the rank-one traceless matrix with image spanned by e.
template <class T>
Vec3<T> null_from_eigenvector(T e1, T e2) {
  return {-e1 * e2, (e1 * e1 - e2 * e2) / T(2), (e1 * e1 + e2 * e2) / T(2)};
}

// Eigenvector of g for eigenvalue mu, from the larger row of g - mu I.
template <class T>
std::pair<T, T> eigvec2(const Mat2<T>& g, T mu) {
  using std::abs;
  const T r1a = g.a - mu, r1b = g.b, r2a = g.c, r2b = g.d - mu;
  if (abs(r1a) + abs(r1b) >= abs(r2a) + abs(r2b)) return {r1b, -r1a};
  return {r2b, -r2a};
}

}  // namespace detail

// Vector v with (x - x^-1) w = cross(v, w): the skew part of an isometry points
// along its fixed line, and extracting it avoids the kernel of x - I, which
// loses digits once the entries of x are large.
template <class T>
Vec3<T> skew_axis(const Mat3<T>& x) {
  const Mat3<T> m = x - lorentz_inverse(x);
  return {-(m(1, 2) + m(2, 1)) / T(2), (m(0, 2) + m(2, 0)) / T(2), (m(1, 0) - m(0, 1)) / T(2)};
}

// Unit fixed vector X0 with det3(u, X u, X0) > 0 for the timelike probe u.
// Parabolic input returns the z-normalized null fixed vector (scale-ambiguous).
template <class T>
Vec3<T> neutral_vector(const Mat3<T>& x, const Vec3<T>& probe = {T(0), T(0), T(1)},
                       bool* scale_ambiguous = nullptr) {
  using std::abs;
  const IsometryClass cls = classify_isometry(x);
  if (cls == IsometryClass::elliptic || cls == IsometryClass::identity)
    throw std::domain_error("neutral_vector: isometry is not hyperbolic");
  if (scale_ambiguous) *scale_ambiguous = (cls == IsometryClass::parabolic);
  Vec3<T> v = skew_axis(x);
  if (cls == IsometryClass::parabolic) {
    v = v / abs(v.z);
  } else {
    v = unit_spacelike(v);
  }
  return detail::fix_neutral_sign(x, v, probe);
}

// Same vector computed from an SL(2,R) lift: the traceless part of g commutes
// with g, so it spans the fixed line of Ad(g) without any cancellation in Ad(g).
template <class T>
Vec3<T> neutral_vector_sl2(const Mat2<T>& g) {
  using std::abs;
  const T h = g.trace() / T(2);
  if (!(abs(h) > T(1))) throw std::domain_error("neutral_vector_sl2: element is not hyperbolic");
  Mat2<T> tl = g;
  tl.a = (g.a - g.d) / T(2);
  tl.d = -tl.a;
  Vec3<T> v = unit_spacelike(sl2_coords(tl));
  const Vec3<T> e3{T(0), T(0), T(1)};
  const Vec3<T> ge3 = sl2_coords(g * sl2_matrix(e3) * g.inverse());
  if (det3(e3, ge3, v) < T(0)) v = -v;
  return v;
}

// Attracting point first for hyperbolic input, single point for parabolic.
template <class T>
std::vector<Vec3<T>> fixed_ideal_points(const Mat3<T>& x) {
  const IsometryClass cls = classify_isometry(x);
  if (cls == IsometryClass::elliptic || cls == IsometryClass::identity)
    throw std::domain_error("fixed_ideal_points: isometry is elliptic or trivial");
  auto null_eig = [&](T lambda) {
    Vec3<T> v = detail::kernel_rank2(x - lambda * Mat3<T>::identity());
    return z_normalized(v);
  };
  if (cls == IsometryClass::parabolic) return {null_eig(T(1))};
  const T r = spectral_radius(x);
  return {null_eig(r), null_eig(T(1) / r)};
}

template <class T>
std::vector<Vec3<T>> fixed_ideal_points_sl2(const Mat2<T>& g, double tol = 1e-12) {
  using std::sqrt;
  using std::abs;
  const T h = g.trace() / T(2);
  const T disc = h * h - T(1);
  if (disc < -T(tol) * std::max(T(1), h * h)) throw std::domain_error("fixed_ideal_points_sl2: elliptic");
  auto to_null = [&](T mu) {
    auto [e1, e2] = detail::eigvec2(g, mu);
    return z_normalized(detail::null_from_eigenvector(e1, e2));
  };
  if (disc <= T(tol) * std::max(T(1), h * h)) return {to_null(h)};
  const T root = sqrt(disc);
  const T big = h > T(0) ? h + root : h - root;
  return {to_null(big), to_null(T(1) / big)};
}

template <class T = double>
struct Halfplane {
  Vec3<T> s;
};

template <class T>
bool halfplane_contains(const Halfplane<T>& h, const Vec3<T>& w, double eps = kEps) {
  if (classify(w, eps) != CausalClass::timelike_future)
    throw std::domain_error("halfplane_contains: point must be future timelike");
  return inner(w, h.s) >= T(-eps);
}

template <class T = double>
struct IdealTriangle {
  std::array<Vec3<T>, 3> sides;     // unit, outward
  std::array<Vec3<T>, 3> vertices;  // z-normalized cusps
};

// Sides are ordered (s12, s13, s23) and oriented against the incenter direction.
template <class T>
IdealTriangle<T> ideal_triangle_from_cusps(const Vec3<T>& n1, const Vec3<T>& n2,
                                           const Vec3<T>& n3, double eps = kEps) {
  const std::array<Vec3<T>, 3> n = {z_normalized(n1), z_normalized(n2), z_normalized(n3)};
  const Vec3<T> inc = n[0] + n[1] + n[2];
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  IdealTriangle<T> tri;
  tri.vertices = n;
  for (int k = 0; k < 3; ++k) {
    const Vec3<T> c = cross(n[pairs[k][0]], n[pairs[k][1]]);
    if (!(inner(c, c) > T(eps))) throw std::domain_error("ideal_triangle_from_cusps: proportional cusps");
    Vec3<T> s = unit_spacelike(c);
    if (inner(inc, s) > T(0)) s = -s;
    tri.sides[k] = s;
  }
  return tri;
}

template <class T>
Mat3<T> gram(const std::array<Vec3<T>, 3>& s) {
  Mat3<T> g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = inner(s[i], s[j]);
  return g;
}

}  // namespace margulis
