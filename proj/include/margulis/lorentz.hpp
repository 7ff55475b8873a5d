#pragma once
// Minkowski 3-space: signature (2,1) inner product, Lorentzian cross product,
// null frames, linear and particle involutions.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace margulis {

inline constexpr double kEps = 1e-9;

template <class T = double>
struct Vec3 {
  T x{}, y{}, z{};

  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(const T& k) { x *= k; y *= k; z *= k; return *this; }
  friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(Vec3 a, const T& k) { return a *= k; }
  friend Vec3 operator*(const T& k, Vec3 a) { return a *= k; }
  friend Vec3 operator/(const Vec3& a, const T& k) { return {a.x / k, a.y / k, a.z / k}; }

  template <class U>
  Vec3<U> cast() const { return {U(x), U(y), U(z)}; }
};

template <class T>
Vec3<double> to_double(const Vec3<T>& v) {
  return {static_cast<double>(v.x), static_cast<double>(v.y), static_cast<double>(v.z)};
}

template <class T = double>
struct Mat3 {
  std::array<std::array<T, 3>, 3> m{};

  T& operator()(int i, int j) { return m[i][j]; }
  const T& operator()(int i, int j) const { return m[i][j]; }

  static Mat3 identity() {
    Mat3 r;
    for (int i = 0; i < 3; ++i) r(i, i) = T(1);
    return r;
  }
  static Mat3 from_columns(const Vec3<T>& c0, const Vec3<T>& c1, const Vec3<T>& c2) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      r(i, 0) = c0[i];
      r(i, 1) = c1[i];
      r(i, 2) = c2[i];
    }
    return r;
  }
  Vec3<T> row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
  Vec3<T> col(int j) const { return {m[0][j], m[1][j], m[2][j]}; }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        T s(0);
        for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
        r(i, j) = s;
      }
    return r;
  }
  friend Vec3<T> operator*(const Mat3& a, const Vec3<T>& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
  }
  friend Mat3 operator+(Mat3 a, const Mat3& b) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) += b(i, j);
    return a;
  }
  friend Mat3 operator-(Mat3 a, const Mat3& b) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) -= b(i, j);
    return a;
  }
  friend Mat3 operator*(const T& k, Mat3 a) {
    for (auto& r : a.m)
      for (auto& e : r) e *= k;
    return a;
  }

  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = m[j][i];
    return r;
  }
  T trace() const { return m[0][0] + m[1][1] + m[2][2]; }
  T det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
  Mat3 inverse() const {
    const T d = det();
    if (d == T(0)) throw std::domain_error("singular 3x3 matrix");
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int a = (j + 1) % 3, b = (j + 2) % 3, c = (i + 1) % 3, e = (i + 2) % 3;
        r(i, j) = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) / d;
      }
    return r;
  }
  template <class U>
  Mat3<U> cast() const {
    Mat3<U> r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = U(m[i][j]);
    return r;
  }
};

template <class T>
T max_abs_diff(const Mat3<T>& a, const Mat3<T>& b) {
  using std::abs;
  T r(0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T d = abs(a(i, j) - b(i, j));
      if (d > r) r = d;
    }
  return r;
}

template <class T>
T max_abs(const Mat3<T>& a) {
  using std::abs;
  T r(0);
  for (auto& row : a.m)
    for (auto& e : row)
      if (abs(e) > r) r = abs(e);
  return r;
}

template <class T>
T max_abs(const Vec3<T>& v) {
  using std::abs;
  return std::max({abs(v.x), abs(v.y), abs(v.z)});
}

// Affine Minkowski space: points are displacements from a fixed origin.
template <class T = double>
struct Point {
  Vec3<T> c{};

  friend Vec3<T> operator-(const Point& a, const Point& b) { return a.c - b.c; }
  friend Point operator+(const Point& p, const Vec3<T>& v) { return {p.c + v}; }
  friend Point operator-(const Point& p, const Vec3<T>& v) { return {p.c - v}; }
};

template <class T>
T inner(const Vec3<T>& u, const Vec3<T>& v) {
  return u.x * v.x + u.y * v.y - u.z * v.z;
}

template <class T>
T det3(const Vec3<T>& u, const Vec3<T>& v, const Vec3<T>& w) {
  return u.x * (v.y * w.z - v.z * w.y) - u.y * (v.x * w.z - v.z * w.x) +
         u.z * (v.x * w.y - v.y * w.x);
}

// Defined by inner(cross(u,v), w) == det3(u,v,w).
template <class T>
Vec3<T> cross(const Vec3<T>& u, const Vec3<T>& v) {
  return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, -(u.x * v.y - u.y * v.x)};
}

template <class T>
Vec3<T> euclid_cross(const Vec3<T>& u, const Vec3<T>& v) {
  return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

template <class T>
T euclid_norm(const Vec3<T>& v) {
  using std::sqrt;
  return sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

enum class CausalClass { zero, spacelike, null_future, null_past, timelike_future, timelike_past };

inline const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::zero: return "zero";
    case CausalClass::spacelike: return "spacelike";
    case CausalClass::null_future: return "null-future";
    case CausalClass::null_past: return "null-past";
    case CausalClass::timelike_future: return "timelike-future";
    case CausalClass::timelike_past: return "timelike-past";
  }
  return "?";
}

template <class T>
CausalClass classify(const Vec3<T>& v, double eps = kEps) {
  if (euclid_norm(v) <= T(eps)) return CausalClass::zero;
  const T q = inner(v, v);
  if (q > T(eps)) return CausalClass::spacelike;
  const bool future = v.z > T(0);
  if (q < T(-eps)) return future ? CausalClass::timelike_future : CausalClass::timelike_past;
  return future ? CausalClass::null_future : CausalClass::null_past;
}

template <class T>
Vec3<T> unit_spacelike(const Vec3<T>& s) {
  using std::sqrt;
  const T q = inner(s, s);
  if (!(q > T(0))) throw std::domain_error("vector is not spacelike");
  return s / sqrt(q);
}

// Future-pointing unit timelike representative of the line through t.
template <class T>
Vec3<T> unit_future_timelike(const Vec3<T>& t) {
  using std::sqrt;
  const T q = inner(t, t);
  if (!(q < T(0))) throw std::domain_error("vector is not timelike");
  Vec3<T> r = t / sqrt(-q);
  return r.z < T(0) ? -r : r;
}

template <class T>
Vec3<T> z_normalized(const Vec3<T>& n) {
  if (n.z == T(0)) throw std::domain_error("cannot z-normalize a vector with z = 0");
  return n / n.z;
}

template <class T = double>
struct NullFrame {
  Vec3<T> s, s_minus, s_plus;
};

// s_plus, s_minus span s-perp, z = 1, and cross(s_plus, s_minus) is a positive multiple of s.
template <class T>
NullFrame<T> null_frame(const Vec3<T>& s_in, double eps = kEps) {
  using std::sqrt;
  if (classify(s_in, eps) != CausalClass::spacelike)
    throw std::domain_error("null_frame: director must be spacelike");
  const Vec3<T> s = unit_spacelike(s_in);
  const Vec3<T> e3{T(0), T(0), T(1)};
  Vec3<T> e = e3 - inner(e3, s) * s;
  e = unit_future_timelike(e);
  const Vec3<T> f = cross(s, e);
  Vec3<T> n1 = z_normalized(e + f), n2 = z_normalized(e - f);
  if (inner(cross(n1, n2), s) < T(0)) std::swap(n1, n2);
  return {s, n2, n1};
}

template <class T>
Mat3<T> linear_involution(const Vec3<T>& u, double eps = kEps) {
  const T uu = inner(u, u);
  using std::abs;
  if (abs(uu) <= T(eps)) throw std::domain_error("linear_involution: null vector");
  const Vec3<T> gu{u.x, u.y, -u.z};
  Mat3<T> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = T(2) * u[i] * gu[j] / uu - (i == j ? T(1) : T(0));
  return r;
}

// Inverse of a Lorentz isometry, J X^T J with J = diag(1, 1, -1); no cancellation.
template <class T>
Mat3<T> lorentz_inverse(const Mat3<T>& x) {
  Mat3<T> r = x.transpose();
  for (int i = 0; i < 2; ++i) {
    r(i, 2) = -r(i, 2);
    r(2, i) = -r(2, i);
  }
  return r;
}

// Affine isometries of E.
template <class T = double>
struct AffineMap {
  Mat3<T> lin = Mat3<T>::identity();
  Vec3<T> trans{};

  Point<T> operator()(const Point<T>& p) const { return {lin * p.c + trans}; }
  Vec3<T> apply_vector(const Vec3<T>& v) const { return lin * v; }

  friend AffineMap operator*(const AffineMap& f, const AffineMap& g) {
    return {f.lin * g.lin, f.trans + f.lin * g.trans};
  }
  AffineMap inverse() const {
    const Mat3<T> li = lorentz_inverse(lin);
    return {li, -(li * trans)};
  }
  static AffineMap identity() { return {}; }
};

// Rotation by pi about the particle p + R t.
template <class T>
AffineMap<T> particle_involution(const Point<T>& p, const Vec3<T>& t, double eps = kEps) {
  using std::abs;
  if (abs(inner(t, t) + T(1)) > T(eps))
    throw std::domain_error("particle_involution: t must be unit timelike");
  const Mat3<T> l = linear_involution(t, eps);
  return {l, p.c - l * p.c};
}

}  // namespace margulis
