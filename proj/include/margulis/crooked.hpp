#pragma once
// Crooked planes and halfspaces, crooked ideal triangles, and an exact
// disjointness decider.
//
// With v = w - vertex, a = v.s, b+ = v.s+, b- = v.s-, the open halfspace
// H(s, p) is the union of the sectors
//   {b+ < 0 < b-},  {a > 0, b+ < 0, b- <= 0},  {a < 0, b+ >= 0, b- > 0}.
// Its boundary is the stem {a = 0, v.v <= 0} together with the wings
// {b+ = 0, a >= 0} and {b- = 0, a <= 0}.

#include <algorithm>
#include <optional>
#include <vector>

#include "hyperbolic.hpp"
#include "lp.hpp"

namespace margulis {

enum class Strictness { open, closed };

template <class T = double>
struct CrookedHalfspace {
  NullFrame<T> frame;
  Point<T> vertex;
};

template <class T>
CrookedHalfspace<T> crooked_halfspace(const Vec3<T>& s, const Point<T>& p) {
  return {null_frame(s), p};
}

// Image under an isometry: g H(s, p) = H(X s, g p).
template <class T>
CrookedHalfspace<T> transform(const AffineMap<T>& g, const CrookedHalfspace<T>& h) {
  return crooked_halfspace(g.lin * h.frame.s, g(h.vertex));
}

template <class T>
bool halfspace_contains(const CrookedHalfspace<T>& h, const Point<T>& w,
                        Strictness strict = Strictness::open, double tol = 0.0) {
  const Vec3<T> v = w - h.vertex;
  const T a = inner(v, h.frame.s), bp = inner(v, h.frame.s_plus), bm = inner(v, h.frame.s_minus);
  const T e(tol);
  auto pos = [&](const T& x) { return x > e; };
  auto neg = [&](const T& x) { return x < -e; };
  auto nonneg = [&](const T& x) { return x >= -e; };
  auto nonpos = [&](const T& x) { return x <= e; };
  if (strict == Strictness::open)
    return (neg(bp) && pos(bm)) || (pos(a) && neg(bp) && nonpos(bm)) || (neg(a) && nonneg(bp) && pos(bm));
  return (nonpos(bp) && nonneg(bm)) || (nonneg(a) && nonpos(bp) && nonpos(bm)) ||
         (nonpos(a) && nonneg(bp) && nonneg(bm));
}

template <class T>
bool on_crooked_plane(const CrookedHalfspace<T>& h, const Point<T>& w, double tol = 1e-9) {
  return halfspace_contains(h, w, Strictness::closed, tol) &&
         !halfspace_contains(h, w, Strictness::open, tol);
}

// Coefficients (u+, u-) with v = u- s- - u+ s+, for v in s-perp.
template <class T>
std::pair<T, T> semigroup_coefficients(const NullFrame<T>& f, const Vec3<T>& v) {
  const T pm = inner(f.s_plus, f.s_minus);
  return {-inner(v, f.s_minus) / pm, inner(v, f.s_plus) / pm};
}

template <class T>
bool in_translational_semigroup(const NullFrame<T>& f, const Vec3<T>& v,
                                Strictness strict = Strictness::open, double eps = kEps) {
  using std::abs;
  if (abs(inner(v, f.s)) >= T(eps) * std::max(T(1), euclid_norm(v))) return false;
  const auto [up, um] = semigroup_coefficients(f, v);
  if (strict == Strictness::open) return up > T(eps) && um > T(eps);
  return up >= T(-eps) && um >= T(-eps);
}

template <class T = double>
struct ParallelCrookedSlab {
  NullFrame<T> frame;
  Point<T> p1, p2;  // p2 - p1 in the closed translational semigroup, so H(p2) lies in H(p1)

  bool contains(const Point<T>& w, double tol = 0.0) const {
    return halfspace_contains(CrookedHalfspace<T>{frame, p1}, w, Strictness::closed, tol) &&
           !halfspace_contains(CrookedHalfspace<T>{frame, p2}, w, Strictness::open, tol);
  }
};

template <class T = double>
struct CrookedIdealTriangle {
  std::array<Vec3<T>, 3> sides;  // outward unit directors
  std::array<Point<T>, 3> vertices;

  CrookedHalfspace<T> face(int i) const { return crooked_halfspace(sides[i], vertices[i]); }
};

template <class T = double>
struct StemNormalization {
  Point<T> center;
  std::array<Vec3<T>, 3> q;
};

// Unique O with O.s_i = p_i.s_i, i.e. the common point of the three stem planes.
template <class T>
StemNormalization<T> normalize_vertices(const std::array<Vec3<T>, 3>& s,
                                        const std::array<Point<T>, 3>& p, double eps = kEps) {
  using std::abs;
  Mat3<T> m;
  Vec3<T> rhs;
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = s[i].x;
    m(i, 1) = s[i].y;
    m(i, 2) = -s[i].z;
    rhs[i] = inner(p[i].c, s[i]);
  }
  if (abs(m.det()) <= T(eps)) throw std::domain_error("normalize_vertices: stem planes are not in general position");
  StemNormalization<T> out;
  out.center = {m.inverse() * rhs};
  for (int i = 0; i < 3; ++i) out.q[i] = p[i] - out.center;
  return out;
}

template <class T = double>
struct CitAnalysis {
  Point<T> center;
  std::array<Vec3<T>, 3> q;
  std::array<std::pair<T, T>, 3> u;  // (u+, u-) per face
  CrookedIdealTriangle<T> minimal;
  std::array<ParallelCrookedSlab<T>, 3> slabs;
  bool nondegenerate = false;
};

template <class T>
CitAnalysis<T> analyze_cit(const CrookedIdealTriangle<T>& t, double eps = kEps) {
  CitAnalysis<T> out;
  const auto norm = normalize_vertices(t.sides, t.vertices, eps);
  out.center = norm.center;
  out.q = norm.q;
  out.minimal.sides = t.sides;
  out.nondegenerate = true;
  for (int i = 0; i < 3; ++i) {
    const NullFrame<T> f = null_frame(t.sides[i]);
    out.u[i] = semigroup_coefficients(f, norm.q[i]);
    out.minimal.vertices[i] = norm.center;
    out.slabs[i] = {f, norm.center, t.vertices[i]};
    if (!(out.u[i].first > T(eps) && out.u[i].second > T(eps))) out.nondegenerate = false;
  }
  return out;
}

// Inverse of analyze_cit: vertices O + u- s- - u+ s+.
template <class T>
CrookedIdealTriangle<T> cit_from_coefficients(const std::array<Vec3<T>, 3>& sides, const Point<T>& center,
                                              const std::array<std::pair<T, T>, 3>& u) {
  CrookedIdealTriangle<T> t;
  t.sides = sides;
  for (int i = 0; i < 3; ++i) {
    const NullFrame<T> f = null_frame(sides[i]);
    t.vertices[i] = center + (u[i].second * f.s_minus - u[i].first * f.s_plus);
  }
  return t;
}

// Membership in the closed triangle: outside every open face.
template <class T>
bool cit_contains(const CrookedIdealTriangle<T>& t, const Point<T>& w, double tol = 0.0) {
  for (int i = 0; i < 3; ++i)
    if (halfspace_contains(t.face(i), w, Strictness::open, tol)) return false;
  return true;
}

namespace detail {

// Unit-normalized linear functional x -> g.x + c (Euclidean dot).
struct Functional {
  Vec3<double> g;
  double c;
};

inline Functional make_functional(const Vec3<double>& dir, const Vec3<double>& p) {
  Vec3<double> g{dir.x, dir.y, -dir.z};
  const double n = euclid_norm(g);
  g = g / n;
  return {g, -(g.x * p.x + g.y * p.y + g.z * p.z)};
}

// The three sector closures of a crooked halfspace as lists of (functional, sign).
inline std::vector<std::vector<std::pair<Functional, int>>> sectors(const CrookedHalfspace<double>& h) {
  const Functional a = make_functional(h.frame.s, h.vertex.c);
  const Functional bp = make_functional(h.frame.s_plus, h.vertex.c);
  const Functional bm = make_functional(h.frame.s_minus, h.vertex.c);
  return {{{bp, -1}, {bm, +1}}, {{a, +1}, {bp, -1}, {bm, -1}}, {{a, -1}, {bp, +1}, {bm, +1}}};
}

}  // namespace detail

struct DisjointnessOptions {
  double margin = 1e-9;     // relative strictness margin
  double box_factor = 100;  // search box half-width relative to scale
};

// Open crooked halfspaces are regular open sets, so they meet iff some pair of
// sector closures has interior in common, i.e. the strict system is feasible.
// With `closed` set the inequalities are relaxed instead, which detects
// closures that touch.
template <class T>
std::optional<Vec3<double>> halfspace_intersection_witness(const CrookedHalfspace<T>& h1_in,
                                                           const CrookedHalfspace<T>& h2_in,
                                                           DisjointnessOptions opt = {}, bool closed = false) {
  const CrookedHalfspace<double> h1{{to_double(h1_in.frame.s), to_double(h1_in.frame.s_minus),
                                     to_double(h1_in.frame.s_plus)},
                                    {to_double(h1_in.vertex.c)}};
  const CrookedHalfspace<double> h2{{to_double(h2_in.frame.s), to_double(h2_in.frame.s_minus),
                                     to_double(h2_in.frame.s_plus)},
                                    {to_double(h2_in.vertex.c)}};
  const double scale = std::max({1.0, euclid_norm(h1.vertex.c), euclid_norm(h2.vertex.c)});
  const double delta = (closed ? -1.0 : 1.0) * opt.margin * scale;
  const Vec3<double> center = (h1.vertex.c + h2.vertex.c) * 0.5;
  const double box = opt.box_factor * scale;
  for (const auto& s1 : detail::sectors(h1))
    for (const auto& s2 : detail::sectors(h2)) {
      std::vector<lp::Inequality> rows;
      for (const auto* sec : {&s1, &s2})
        for (const auto& [f, sign] : *sec) {
          // sign * (g.x + c) >= delta
          rows.push_back({f.g * double(sign), delta - sign * f.c});
        }
      if (auto x = lp::find_feasible_point(rows, center, box, 1e-13)) return x;
    }
  return std::nullopt;
}

template <class T>
bool halfspaces_disjoint(const CrookedHalfspace<T>& h1, const CrookedHalfspace<T>& h2,
                         DisjointnessOptions opt = {}) {
  return !halfspace_intersection_witness(h1, h2, opt).has_value();
}

// Closed halfspaces (equivalently their bounding crooked planes, for disjoint
// open sides) share a point.
template <class T>
bool closed_halfspaces_meet(const CrookedHalfspace<T>& h1, const CrookedHalfspace<T>& h2,
                            DisjointnessOptions opt = {}) {
  return halfspace_intersection_witness(h1, h2, opt, true).has_value();
}

template <class T>
bool cit_disjointness_check(const CrookedIdealTriangle<T>& t, DisjointnessOptions opt = {}) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (!halfspaces_disjoint(t.face(i), t.face(j), opt)) return false;
  return true;
}

// ---- meshing ----

struct Mesh {
  std::vector<Vec3<double>> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::pair<std::string, int>> groups;  // name, first face index

  void begin_group(const std::string& name) { groups.emplace_back(name, static_cast<int>(faces.size())); }
  void append(const Mesh& o) {
    const int off = static_cast<int>(vertices.size());
    const int foff = static_cast<int>(faces.size());
    vertices.insert(vertices.end(), o.vertices.begin(), o.vertices.end());
    for (auto f : o.faces) faces.push_back({f[0] + off, f[1] + off, f[2] + off});
    for (auto& [n, i] : o.groups) groups.emplace_back(n, i + foff);
  }
};

namespace detail {

inline Vec3<double> unit(const Vec3<double>& v) { return v / euclid_norm(v); }

inline Vec3<double> slerp(const Vec3<double>& a, const Vec3<double>& b, double t) {
  const double c = std::clamp(a.x * b.x + a.y * b.y + a.z * b.z, -1.0, 1.0);
  const double phi = std::acos(c);
  if (phi < 1e-12) return a;
  return unit(a * (std::sin((1 - t) * phi) / std::sin(phi)) + b * (std::sin(t * phi) / std::sin(phi)));
}

// Fan over the planar sector from d1 through mid to d2, clipped to radius r.
inline void fan(Mesh& m, const Vec3<double>& apex, const Vec3<double>& d1, const Vec3<double>& mid,
                const Vec3<double>& d2, double r, int segments) {
  const int a = static_cast<int>(m.vertices.size());
  m.vertices.push_back(apex);
  std::vector<Vec3<double>> dirs;
  for (int k = 0; k <= segments; ++k) dirs.push_back(slerp(d1, mid, double(k) / segments));
  for (int k = 1; k <= segments; ++k) dirs.push_back(slerp(mid, d2, double(k) / segments));
  for (const auto& d : dirs) m.vertices.push_back(apex + d * r);
  for (int k = 0; k + 1 < static_cast<int>(dirs.size()); ++k) m.faces.push_back({a, a + 1 + k, a + 2 + k});
}

inline Vec3<double> euclid_orth(const Vec3<double>& v, const Vec3<double>& against) {
  const Vec3<double> u = unit(against);
  return unit(v - u * (v.x * u.x + v.y * u.y + v.z * u.z));
}

}  // namespace detail

// Stem (two null quadrants) and the two wings, clipped to a Euclidean ball.
template <class T>
Mesh mesh_crooked_plane(const CrookedHalfspace<T>& h, double clip_radius, int segments = 12) {
  if (!(clip_radius > 0)) throw std::domain_error("mesh_crooked_plane: clip radius must be positive");
  using detail::unit;
  const Vec3<double> p = to_double(h.vertex.c);
  const Vec3<double> s = to_double(h.frame.s);
  const Vec3<double> sp = unit(to_double(h.frame.s_plus)), sm = unit(to_double(h.frame.s_minus));
  Mesh m;
  m.begin_group("stem");
  detail::fan(m, p, sp, unit(sp + sm), sm, clip_radius, segments);
  detail::fan(m, p, -sp, unit(-(sp + sm)), -sm, clip_radius, segments);
  m.begin_group("wing_plus");
  detail::fan(m, p, sp, detail::euclid_orth(s, sp), -sp, clip_radius, segments);
  m.begin_group("wing_minus");
  detail::fan(m, p, sm, detail::euclid_orth(-s, sm), -sm, clip_radius, segments);
  return m;
}

}  // namespace margulis
