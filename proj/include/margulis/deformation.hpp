#pragma once
// Affine deformations, Margulis invariants, affine Coxeter groups built from
// vertex triples, corner matrices, tiles and the tiling atlas.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <map>
#include <set>

#include "crooked.hpp"
#include "rng.hpp"
#include "surface_group.hpp"

namespace margulis {

// Deep tree nodes carry words whose adjoint matrices reach 1e30 and beyond,
// and the alpha rows cancel to O(1); 50 digits already fail at depth 6 for
// hyperbolic boundary. The atlas is computed in this type and rounded at the end.
using Extended = boost::multiprecision::cpp_bin_float_100;

template <class T>
T margulis_invariant(const AffineMap<T>& g, const Point<T>& origin = {}) {
  return inner(neutral_vector(g.lin), g(origin) - origin);
}

template <class T = double>
struct Cocycle {
  Vec3<T> ua, ub;

  Cocycle operator+(const Cocycle& o) const { return {ua + o.ua, ub + o.ub}; }
  Cocycle scaled(const T& k) const { return {ua * k, ub * k}; }
  std::array<T, 6> flat() const { return {ua.x, ua.y, ua.z, ub.x, ub.y, ub.z}; }
  static Cocycle from_flat(const std::array<T, 6>& f) { return {{f[0], f[1], f[2]}, {f[3], f[4], f[5]}}; }
};

template <class T>
Cocycle<T> coboundary(const FuchsianRep<T>& rep, const Vec3<T>& v) {
  return {v - rep.A() * v, v - rep.B() * v};
}

template <class T>
AffineMap<T> evaluate_cocycle(const FuchsianRep<T>& rep, const Cocycle<T>& u, const std::string& w) {
  const AffineMap<T> ga{rep.A(), u.ua}, gb{rep.B(), u.ub};
  const AffineMap<T> gA = ga.inverse(), gB = gb.inverse();
  AffineMap<T> r;
  for (char c : w) {
    switch (c) {
      case 'a': r = r * ga; break;
      case 'A': r = r * gA; break;
      case 'b': r = r * gb; break;
      case 'B': r = r * gB; break;
      default: throw std::domain_error("evaluate_cocycle: invalid letter");
    }
  }
  return r;
}

using Row6 = std::array<double, 6>;

// alpha(w) as a linear functional of (u(a), u(b)).
template <class T>
std::array<T, 6> alpha_row(const FuchsianRep<T>& rep, const std::string& w) {
  const Mat3<T> mA = rep.A(), mB = rep.B();
  const Mat3<T> mAi = from_sl2(rep.a.inverse()), mBi = from_sl2(rep.b.inverse());
  Mat3<T> ra, rb;  // u(w) = ra u(a) + rb u(b)
  Mat3<T> x = Mat3<T>::identity();
  Mat2<T> g;
  for (char c : w) {
    switch (c) {
      case 'a': ra = ra + x; x = x * mA; break;
      case 'A': ra = ra - x * mAi; x = x * mAi; break;
      case 'b': rb = rb + x; x = x * mB; break;
      case 'B': rb = rb - x * mBi; x = x * mBi; break;
      default: throw std::domain_error("alpha_row: invalid letter");
    }
    g = g * letter_sl2(rep, c);
  }
  const Vec3<T> n0 = neutral_vector_sl2(g);
  const Vec3<T> gn{n0.x, n0.y, -n0.z};
  const Vec3<T> pa = ra.transpose() * gn, pb = rb.transpose() * gn;
  return {pa.x, pa.y, pa.z, pb.x, pb.y, pb.z};
}

template <class T>
T apply_row(const std::array<T, 6>& r, const Cocycle<T>& u) {
  const auto f = u.flat();
  T s(0);
  for (int i = 0; i < 6; ++i) s += r[i] * f[i];
  return s;
}

template <class T = double>
struct AlphaMap {
  std::array<std::array<T, 6>, 3> rows;

  Vec3<T> operator()(const Cocycle<T>& u) const {
    return {apply_row(rows[0], u), apply_row(rows[1], u), apply_row(rows[2], u)};
  }
  Mat3<T> gram() const {
    Mat3<T> g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        T s(0);
        for (int k = 0; k < 6; ++k) s += rows[i][k] * rows[j][k];
        g(i, j) = s;
      }
    return g;
  }
  // Minimum-norm preimage of an alpha triple.
  Cocycle<T> min_norm_preimage(const Vec3<T>& target) const {
    const Vec3<T> y = gram().inverse() * target;
    std::array<T, 6> f{};
    for (int k = 0; k < 6; ++k) f[k] = rows[0][k] * y.x + rows[1][k] * y.y + rows[2][k] * y.z;
    return Cocycle<T>::from_flat(f);
  }
  // Condition number of the 3x3 Gram matrix in the Frobenius norm.
  T condition() const {
    using std::sqrt;
    auto fro = [](const Mat3<T>& m) {
      T s(0);
      for (auto& r : m.m)
        for (auto& e : r) s += e * e;
      return sqrt(s);
    };
    const Mat3<T> g = gram();
    return fro(g) * fro(g.inverse());
  }
};

template <class T>
AlphaMap<T> alpha_map(const FuchsianRep<T>& rep, const BasicTriple& t) {
  return {{alpha_row(rep, t.A()), alpha_row(rep, t.B()), alpha_row(rep, t.C())}};
}

template <class T>
Vec3<T> alpha_coordinates(const FuchsianRep<T>& rep, const Cocycle<T>& u, const BasicTriple& t) {
  return alpha_map(rep, t)(u);
}

template <class T>
Cocycle<T> cocycle_from_alpha(const FuchsianRep<T>& rep, const Vec3<T>& target, const BasicTriple& t) {
  const AlphaMap<T> m = alpha_map(rep, t);
  if (!(m.gram().det() != T(0))) throw std::domain_error("cocycle_from_alpha: singular alpha map");
  return m.min_norm_preimage(target);
}

// ---- affine Coxeter groups from vertex triples ----

// (u+, u-) for faces 0, 1, 2.
template <class T>
using VertexCoefficients = std::array<std::pair<T, T>, 3>;

template <class T = double>
struct AffineCoxeter {
  PointedTriangle<T> triangle;
  std::array<Vec3<T>, 3> q;             // vertex offsets from the origin
  std::array<AffineMap<T>, 3> iota;     // particle involutions
  AffineMap<T> A, B, C;
  Cocycle<T> cocycle;

  CrookedIdealTriangle<T> cit() const {
    CrookedIdealTriangle<T> c;
    c.sides = triangle.tri.sides;
    for (int i = 0; i < 3; ++i) c.vertices[i] = Point<T>{q[i]};
    return c;
  }
};

// Vertex offsets q_i = -orientation (u+_i m_i - u-_i m_{i+1}) on side i with
// endpoints (m_i, m_{i+1}) = (n, i0 n), (i0 n, i2 n), (i2 n, n).
template <class T>
std::array<Vec3<T>, 3> vertex_triple(const PointedTriangle<T>& tri, const VertexCoefficients<T>& u) {
  std::array<Vec3<T>, 3> q;
  const T eps(tri.orientation);
  for (int i = 0; i < 3; ++i)
    q[i] = eps * (u[i].second * tri.cusp[(i + 1) % 3] - u[i].first * tri.cusp[i]);
  return q;
}

template <class T>
AffineCoxeter<T> affine_coxeter(const CoxeterExtension<T>& e, const PointedTriangle<T>& tri,
                                const VertexCoefficients<T>& u) {
  AffineCoxeter<T> out;
  out.triangle = tri;
  out.q = vertex_triple(tri, u);
  for (int i = 0; i < 3; ++i) out.iota[i] = particle_involution(Point<T>{out.q[i]}, e.t[i], 1e-7);
  out.A = out.iota[2] * out.iota[0];
  out.B = out.iota[0] * out.iota[1];
  out.C = out.iota[1] * out.iota[2];
  out.cocycle = {out.A.trans, out.B.trans};
  return out;
}

template <class T>
Vec3<T> alpha_via_lemma(const std::array<Vec3<T>, 3>& q, const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  return {T(2) * inner(q[2] - q[0], a), T(2) * inner(q[0] - q[1], b), T(2) * inner(q[1] - q[2], c)};
}

template <class T>
std::array<Vec3<T>, 3> neutral_triple(const FuchsianRep<T>& rep) {
  return {neutral_vector_sl2(rep.a), neutral_vector_sl2(rep.b), neutral_vector_sl2(rep.c_sl2())};
}

// 3x2 array: rows (alpha A, alpha B, alpha C), columns (u+, u-).
template <class T = double>
struct CornerMatrix {
  std::array<std::array<T, 2>, 3> m{};

  Vec3<T> apply(const T& up, const T& um) const {
    return {m[0][0] * up + m[0][1] * um, m[1][0] * up + m[1][1] * um, m[2][0] * up + m[2][1] * um};
  }
  // sigma2 / sigma1 from the eigenvalues of the 2x2 matrix M^T M.
  T singular_ratio() const {
    using std::sqrt;
    using std::abs;
    T p(0), q(0), r(0);
    for (int i = 0; i < 3; ++i) {
      p += m[i][0] * m[i][0];
      q += m[i][0] * m[i][1];
      r += m[i][1] * m[i][1];
    }
    const T tr = p + r, det = p * r - q * q;
    const T big = tr / T(2) + sqrt((p - r) * (p - r) / T(4) + q * q);
    if (big == T(0)) return T(0);
    const T small = abs(det) / big;
    return sqrt(small / big);
  }
};

// M[i] for face i: half the alpha vector equals sum_i M[i] (u+_i, u-_i).
template <class T>
std::array<CornerMatrix<T>, 3> corner_matrices(const FuchsianRep<T>& rep, const PointedTriangle<T>& tri) {
  const auto [a, b, c] = neutral_triple(rep);
  const auto& m = tri.cusp;
  const T e(tri.orientation);
  std::array<CornerMatrix<T>, 3> out;
  out[0].m = {{{e * inner(a, m[0]), -e * inner(a, m[1])}, {-e * inner(b, m[0]), e * inner(b, m[1])}, {T(0), T(0)}}};
  out[1].m = {{{T(0), T(0)}, {e * inner(b, m[1]), -e * inner(b, m[2])}, {-e * inner(c, m[1]), e * inner(c, m[2])}}};
  out[2].m = {{{-e * inner(a, m[2]), e * inner(a, m[0])}, {T(0), T(0)}, {e * inner(c, m[2]), -e * inner(c, m[0])}}};
  return out;
}

template <class T>
Vec3<T> three_terms(const std::array<CornerMatrix<T>, 3>& M, const VertexCoefficients<T>& u) {
  Vec3<T> s{};
  for (int i = 0; i < 3; ++i) s += M[i].apply(u[i].first, u[i].second);
  return T(2) * s;
}

// Which alpha row vanishes on corner i: face 0 -> C, face 1 -> A, face 2 -> B.
inline constexpr std::array<int, 3> kCornerZeroRow = {2, 0, 1};

// ---- tiles ----

template <class T>
Vec3<T> unit_euclid(const Vec3<T>& v) {
  return v / euclid_norm(v);
}

struct Tile {
  TreeNode node;
  std::array<Vec3<double>, 3> corners;       // positive branch, base alpha coordinates, unit
  std::array<Vec3<double>, 3> node_corners;  // realized, alpha coordinates of the node words
  std::array<double, 3> rank_ratio{};        // sigma2/sigma1 of each corner matrix
  std::array<double, 3> corner_zero_residual{};
};

template <class T>
struct TileContext {
  FuchsianRep<T> rep;
  AlphaMap<T> base;
  FixedPointChoice choice = FixedPointChoice::plus;
};

template <class T>
struct RealizedTile {
  std::array<Vec3<T>, 3> node_corners;
  std::array<Vec3<T>, 3> base_corners;  // realized branch, unnormalized
  std::array<T, 3> rank_ratio;
  std::array<T, 3> zero_residual;
};

template <class T>
RealizedTile<T> realize_tile(const TileContext<T>& ctx, const BasicTriple& words) {
  using std::abs;
  const FuchsianRep<T> rn = rep_for_triple(ctx.rep, words);
  const CoxeterExtension<T> ext = coxeter_extension(rn);
  const FixedPointCycle<T> cyc = fixed_point_cycle(ext, ctx.choice);
  const PointedTriangle<T> tri = fundamental_triangle(ext, cyc.n);
  const auto M = corner_matrices(rn, tri);
  const AlphaMap<T> node = alpha_map(ctx.rep, words);
  const Mat3<T> gi = node.gram().inverse();
  RealizedTile<T> out;
  for (int i = 0; i < 3; ++i) {
    const Vec3<T> c = M[i].apply(T(1), T(1));
    out.node_corners[i] = c;
    out.rank_ratio[i] = M[i].singular_ratio();
    out.zero_residual[i] = abs(c[kCornerZeroRow[i]]) / euclid_norm(c);
    const Vec3<T> y = gi * c;
    std::array<T, 6> f{};
    for (int k = 0; k < 6; ++k) f[k] = node.rows[0][k] * y.x + node.rows[1][k] * y.y + node.rows[2][k] * y.z;
    out.base_corners[i] = ctx.base(Cocycle<T>::from_flat(f));
  }
  return out;
}

enum class TileLocation { interior, edge, corner, outside };

inline const char* to_string(TileLocation l) {
  switch (l) {
    case TileLocation::interior: return "interior";
    case TileLocation::edge: return "edge";
    case TileLocation::corner: return "corner";
    case TileLocation::outside: return "outside";
  }
  return "?";
}

inline Vec3<double> barycentric(const Tile& t, const Vec3<double>& d) {
  return Mat3<double>::from_columns(t.corners[0], t.corners[1], t.corners[2]).inverse() * d;
}

inline TileLocation tile_contains(const Tile& t, const Vec3<double>& d, double eps = 1e-8) {
  const Vec3<double> lam = barycentric(t, unit_euclid(d));
  int zero = 0, pos = 0;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(lam[i]) <= eps) ++zero;
    else if (lam[i] > eps) ++pos;
  }
  if (pos == 3) return TileLocation::interior;
  if (zero == 1 && pos == 2) return TileLocation::edge;
  if (zero == 2 && pos == 1) return TileLocation::corner;
  return TileLocation::outside;
}

// Chart of the positive branch: barycentric placement on an equilateral
// triangle, sum of coordinates normalized to 1.
template <class T>
std::array<T, 2> chart(const Vec3<T>& d) {
  using std::sqrt;
  const T s = d.x + d.y + d.z;
  const T a = d.x / s, b = d.y / s, c = d.z / s;
  const T h = sqrt(T(3)) / T(2);
  return {h * (c - b), a - (b + c) / T(2)};
}

struct TilingAtlas {
  std::vector<Tile> tiles;
  int branch = 1;  // sign taking realized alpha to the positive branch
  bool in_positive_cone = true;
  double max_shared_edge_error = 0;
  std::vector<FareyFraction> boundary;          // corner labels around Tame_n
  std::vector<Vec3<double>> boundary_corners;   // matching directions
  int boundary_edges = 0;
  bool convex = false;
  double min_turn = 0, max_turn = 0;  // sine of the turning angle at each boundary corner
};

namespace detail {

inline FareyFraction corner_label(const Tile& t, int i) { return t.node.label[kCornerZeroRow[i]]; }

template <class T>
T turn_sine(const std::array<T, 2>& a, const std::array<T, 2>& b, const std::array<T, 2>& c) {
  using std::sqrt;
  const T ux = b[0] - a[0], uy = b[1] - a[1], vx = c[0] - b[0], vy = c[1] - b[1];
  return (ux * vy - uy * vx) / sqrt((ux * ux + uy * uy) * (vx * vx + vy * vy));
}

}  // namespace detail

template <class T = Extended>
TilingAtlas enumerate_tiles(const FuchsianRep<T>& rep, int depth,
                            FixedPointChoice choice = FixedPointChoice::plus) {
  using std::sqrt;
  TilingAtlas atlas;
  const auto nodes = enumerate_tree(depth);
  const TileContext<T> ctx{rep, alpha_map(rep, base_triple()), choice};
  std::vector<RealizedTile<T>> raw;
  raw.reserve(nodes.size());
  for (const auto& nd : nodes) raw.push_back(realize_tile(ctx, nd.words));
  const Vec3<T> s0 = raw[0].base_corners[0] + raw[0].base_corners[1] + raw[0].base_corners[2];
  atlas.branch = (s0.x + s0.y + s0.z) > T(0) ? 1 : -1;
  std::vector<std::array<Vec3<T>, 3>> dirs(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Tile t;
    t.node = nodes[k];
    for (int i = 0; i < 3; ++i) {
      dirs[k][i] = unit_euclid(Vec3<T>(T(atlas.branch) * raw[k].base_corners[i]));
      t.corners[i] = to_double(dirs[k][i]);
      t.node_corners[i] = to_double(unit_euclid(raw[k].node_corners[i]));
      t.rank_ratio[i] = static_cast<double>(raw[k].rank_ratio[i]);
      t.corner_zero_residual[i] = static_cast<double>(raw[k].zero_residual[i]);
      const auto& c = dirs[k][i];
      if (c.x < T(-1e-30) || c.y < T(-1e-30) || c.z < T(-1e-30)) atlas.in_positive_cone = false;
    }
    atlas.tiles.push_back(t);
  }
  // Corners are keyed by the fraction whose alpha vanishes there; edges by the
  // pair of corner labels. Shared corners must agree geometrically.
  std::map<FareyFraction, Vec3<T>> corner_dir;
  std::map<std::pair<FareyFraction, FareyFraction>, int> edge_count;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Tile& t = atlas.tiles[k];
    for (int i = 0; i < 3; ++i) {
      const FareyFraction f = detail::corner_label(t, i);
      auto [it, fresh] = corner_dir.emplace(f, dirs[k][i]);
      if (!fresh)
        atlas.max_shared_edge_error =
            std::max(atlas.max_shared_edge_error, static_cast<double>(euclid_norm(Vec3<T>(it->second - dirs[k][i]))));
    }
    for (int i = 0; i < 3; ++i) {
      FareyFraction f = detail::corner_label(t, i), g = detail::corner_label(t, (i + 1) % 3);
      if (g < f) std::swap(f, g);
      ++edge_count[{f, g}];
    }
  }
  std::map<FareyFraction, std::vector<FareyFraction>> adj;
  for (const auto& [e, n] : edge_count)
    if (n == 1) {
      adj[e.first].push_back(e.second);
      adj[e.second].push_back(e.first);
      ++atlas.boundary_edges;
    }
  bool simple_cycle = !adj.empty();
  for (const auto& [f, nb] : adj)
    if (nb.size() != 2) simple_cycle = false;
  if (simple_cycle) {
    const FareyFraction start = adj.begin()->first;
    FareyFraction prev = start, cur = adj.begin()->second[0];
    atlas.boundary.push_back(start);
    while (!(cur == start) && atlas.boundary.size() <= adj.size()) {
      atlas.boundary.push_back(cur);
      const auto& nb = adj[cur];
      const FareyFraction next = nb[0] == prev ? nb[1] : nb[0];
      prev = cur;
      cur = next;
    }
    if (atlas.boundary.size() != adj.size()) simple_cycle = false;
  }
  if (simple_cycle) {
    std::vector<std::array<T, 2>> pts;
    for (const auto& f : atlas.boundary) {
      atlas.boundary_corners.push_back(to_double(corner_dir[f]));
      pts.push_back(chart(corner_dir[f]));
    }
    const std::size_t n = pts.size();
    T lo(1e300), hi(-1e300);
    for (std::size_t i = 0; i < n; ++i) {
      const T t = detail::turn_sine(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
      if (t < lo) lo = t;
      if (t > hi) hi = t;
    }
    atlas.min_turn = static_cast<double>(lo);
    atlas.max_turn = static_cast<double>(hi);
    atlas.convex = n >= 3 && (lo > T(0) || hi < T(0));
  }
  return atlas;
}

inline TilingAtlas enumerate_tiles(double x, double y, double z, int depth,
                                   FixedPointChoice choice = FixedPointChoice::plus) {
  return enumerate_tiles<Extended>(rep_from_traces<Extended>(Extended(x), Extended(y), Extended(z)), depth, choice);
}

struct TileDisjointnessReport {
  std::size_t pairs = 0;
  std::vector<std::pair<int, int>> violations;
};

// Two spherical triangles in the positive chart have disjoint interiors iff
// one of their six edge lines separates them.
inline bool tile_interiors_disjoint(const Tile& p, const Tile& q, double tol = 1e-10) {
  auto separated_by_edges_of = [&](const Tile& a, const Tile& b) {
    for (int i = 0; i < 3; ++i) {
      const Vec3<double> nrm = euclid_cross(a.corners[i], a.corners[(i + 1) % 3]);
      const Vec3<double>& opp = a.corners[(i + 2) % 3];
      const double side = nrm.x * opp.x + nrm.y * opp.y + nrm.z * opp.z;
      const double sgn = side > 0 ? 1.0 : -1.0;
      bool all_out = true;
      for (const auto& c : b.corners)
        if (sgn * (nrm.x * c.x + nrm.y * c.y + nrm.z * c.z) > tol) {
          all_out = false;
          break;
        }
      if (all_out) return true;
    }
    return false;
  };
  return separated_by_edges_of(p, q) || separated_by_edges_of(q, p);
}

inline TileDisjointnessReport tiles_disjoint(const TilingAtlas& atlas, double tol = 1e-10) {
  TileDisjointnessReport r;
  const int n = static_cast<int>(atlas.tiles.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ++r.pairs;
      if (!tile_interiors_disjoint(atlas.tiles[i], atlas.tiles[j], tol)) r.violations.emplace_back(i, j);
    }
  return r;
}

// ---- flip identity ----

struct FlipIdentity {
  double a = 0, b = 0, c = 0, residual = 0;
};

// Differentiated trace identity along the tree edge that flips `slot`:
// alpha(C') = a alpha(A) + b alpha(B) - c alpha(C) with C the replaced word.
template <class T>
FlipIdentity flip_covector_identity(const FuchsianRep<T>& rep, const BasicTriple& node, int slot) {
  using std::abs;
  using std::sqrt;
  const BasicTriple r = rotate(node, slot + 1);
  const BasicTriple child = flip(node, slot);
  const std::string& cp = child.C();
  auto half = [&](const std::string& w, T& ch, T& sh) {
    const T h = abs(evaluate_word_sl2(rep, w).trace()) / T(2);
    if (!(h > T(1))) throw std::domain_error("flip_covector_identity: parabolic entry");
    ch = h;
    sh = sqrt(h * h - T(1));
  };
  T chA, shA, chB, shB, chC, shC, chP, shP;
  half(r.A(), chA, shA);
  half(r.B(), chB, shB);
  half(r.C(), chC, shC);
  half(cp, chP, shP);
  FlipIdentity out;
  const T a = T(2) * shA * chB / shP, b = T(2) * chA * shB / shP, c = shC / shP;
  const auto rA = alpha_row(rep, r.A()), rB = alpha_row(rep, r.B()), rC = alpha_row(rep, r.C()), rP = alpha_row(rep, cp);
  T res(0);
  for (int k = 0; k < 6; ++k) {
    const T d = abs(rP[k] - (a * rA[k] + b * rB[k] - c * rC[k]));
    if (d > res) res = d;
  }
  out.a = static_cast<double>(a);
  out.b = static_cast<double>(b);
  out.c = static_cast<double>(c);
  out.residual = static_cast<double>(res);
  return out;
}

// ---- edge quadrilaterals ----

template <class T = double>
struct EdgeQuadrilateral {
  AffineCoxeter<T> group;
  std::array<CrookedHalfspace<T>, 4> faces;  // H1, H2, i0 H1, i0 H2
  std::array<bool, 6> pair_disjoint{};         // open halfspaces
  std::array<bool, 6> pair_closed_disjoint{};  // closures, i.e. a gap between faces
  double hinge_n_residual = 0;       // stem of face 2 along R n ends at -u-_2
  double hinge_i0n_residual = 0;     // stem of face 1 along R i0n starts at u+_1
  bool hinge_rays_oriented = false;  // past ray for n, future ray for i0 n
  bool all_disjoint() const {
    for (int k = 0; k < 6; ++k)
      if (!pair_disjoint[k] || !pair_closed_disjoint[k]) return false;
    return true;
  }
};

namespace detail {

// The stem of h meets the line O + t d in {t <= t*} or {t >= t*} when d is a
// null vector in the stem plane; returns t* and whether the ray is t <= t*.
template <class T>
std::pair<T, bool> stem_null_line(const CrookedHalfspace<T>& h, const Vec3<T>& d) {
  const Vec3<T> q = h.vertex.c;
  const T dq = inner(d, q);
  return {inner(q, q) / (T(2) * dq), dq < T(0)};
}

}  // namespace detail

template <class T>
EdgeQuadrilateral<T> edge_quadrilateral(const CoxeterExtension<T>& e, const PointedTriangle<T>& tri,
                                        std::pair<T, T> u1, std::pair<T, T> u2,
                                        DisjointnessOptions opt = {}) {
  using std::abs;
  if (u1.first < T(0) || u1.second < T(0) || u2.first < T(0) || u2.second < T(0))
    throw std::domain_error("edge_quadrilateral: coefficients must be nonnegative");
  EdgeQuadrilateral<T> out;
  out.group = affine_coxeter(e, tri, VertexCoefficients<T>{{{T(0), T(0)}, u1, u2}});
  const CrookedIdealTriangle<T> c = out.group.cit();
  const AffineMap<T> i0 = particle_involution(Point<T>{}, e.t[0], 1e-7);
  out.faces = {c.face(1), c.face(2), transform(i0, c.face(1)), transform(i0, c.face(2))};
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j, ++k) {
      out.pair_disjoint[k] = halfspaces_disjoint(out.faces[i], out.faces[j], opt);
      out.pair_closed_disjoint[k] = !closed_halfspaces_meet(out.faces[i], out.faces[j], opt);
    }
  if (u2.first == T(0) || u1.second == T(0)) return out;  // hinge rays degenerate
  const auto [tn, past] = detail::stem_null_line(out.faces[1], tri.cusp[0]);
  const auto [ti, past_i] = detail::stem_null_line(out.faces[0], tri.cusp[1]);
  out.hinge_n_residual = static_cast<double>(abs(tn + u2.second));
  out.hinge_i0n_residual = static_cast<double>(abs(ti - u1.first));
  out.hinge_rays_oriented = past && !past_i;
  return out;
}

// ---- fundamental domain sampling ----

// Orientation- and time-preserving isometry x -> L (x - center) with L taking
// the incenter of the ideal triangle to (0, 0, 1): a product of the Lorentz
// reflection swapping the two points and the reflection x -> -x.
template <class T>
AffineMap<T> standard_position(const IdealTriangle<T>& tri, const Point<T>& center) {
  const Vec3<T> t = unit_future_timelike(Vec3<T>(tri.sides[0] + tri.sides[1] + tri.sides[2]));
  const Vec3<T> e3{T(0), T(0), T(1)};
  Mat3<T> L = Mat3<T>::identity();
  const Vec3<T> w = t - e3;
  const T ww = inner(w, w);
  if (ww > T(1e-24)) {
    Mat3<T> R;
    for (int j = 0; j < 3; ++j) {
      Vec3<T> e{};
      e[j] = T(1);
      const Vec3<T> col = e - (T(2) * inner(e, w) / ww) * w;
      for (int i = 0; i < 3; ++i) R(i, j) = col[i];
    }
    Mat3<T> flip = Mat3<T>::identity();
    flip(0, 0) = T(-1);
    L = flip * R;
  }
  return {L, -(L * center.c)};
}

template <class T>
void conjugate_domain(const AffineMap<T>& g, std::vector<CrookedHalfspace<T>>& faces,
                      std::vector<AffineMap<T>>& gens) {
  for (auto& f : faces) f = transform(g, f);
  const AffineMap<T> gi = g.inverse();
  for (auto& h : gens) h = g * h * gi;
}


struct DomainReport {
  std::size_t samples = 0, attempts = 0, words = 0, violations = 0;
};

// Reduced words of length 1..L in generators with an involutive inverse table.
inline std::vector<std::vector<int>> reduced_words(const std::vector<int>& inverse_of, int max_len) {
  std::vector<std::vector<int>> out, layer{{}};
  const int g = static_cast<int>(inverse_of.size());
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : layer)
      for (int k = 0; k < g; ++k) {
        if (!w.empty() && inverse_of[w.back()] == k) continue;
        auto v = w;
        v.push_back(k);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Samples points of the open domain (outside every closed face) and checks
// that no nontrivial word moves one back into it.
template <class T>
DomainReport verify_fundamental_domain(const std::vector<CrookedHalfspace<T>>& faces,
                                       const std::vector<AffineMap<T>>& gens, const std::vector<int>& inverse_of,
                                       int max_len, std::size_t samples, std::uint64_t seed,
                                       double box, double tol = 1e-9) {
  DomainReport r;
  auto inside = [&](const Point<double>& x) {
    for (const auto& f : faces) {
      const CrookedHalfspace<double> h{{to_double(f.frame.s), to_double(f.frame.s_minus), to_double(f.frame.s_plus)},
                                       {to_double(f.vertex.c)}};
      if (halfspace_contains(h, x, Strictness::closed, tol)) return false;
    }
    return true;
  };
  const auto words = reduced_words(inverse_of, max_len);
  r.words = words.size();
  // compose at full precision; long words amplify rounding in the generators
  std::vector<AffineMap<T>> exact;
  std::vector<AffineMap<double>> maps;
  for (const auto& w : words) {
    AffineMap<T> m;
    for (int k : w) m = m * gens[k];
    exact.push_back(m);
    maps.push_back({m.lin.template cast<double>(), to_double(m.trans)});
  }
  // thin domains sit below double resolution; a hit in double is rechecked in T
  auto inside_exact = [&](const Point<T>& x) {
    for (const auto& f : faces)
      if (halfspace_contains(f, x, Strictness::closed, 0.0)) return false;
    return true;
  };
  CounterRng rng(seed);
  const std::size_t cap = samples * 1000 + 1000;
  while (r.samples < samples && r.attempts < cap) {
    ++r.attempts;
    const Point<double> x{{rng.uniform(-box, box), rng.uniform(-box, box), rng.uniform(-box, box)}};
    if (!inside(x)) continue;
    ++r.samples;
    for (std::size_t k = 0; k < maps.size(); ++k) {
      if (!inside(maps[k](x))) continue;
      const Point<T> xt{x.c.template cast<T>()};
      if (inside_exact(xt) && inside_exact(exact[k](xt))) ++r.violations;
    }
  }
  return r;
}

// ---- domains for a given deformation direction ----

enum class DomainKind { triangle, quadrilateral };

template <class T = double>
struct DomainRealization {
  DomainKind kind = DomainKind::triangle;
  int tile = -1;
  BasicTriple words;                   // node triple, rotated so a degenerate face is face 0
  Vec3<double> direction;              // positive branch, base coordinates
  Vec3<T> node_alpha;                  // realized alpha of the node words
  VertexCoefficients<T> u{};
  CoxeterExtension<T> extension;
  PointedTriangle<T> triangle;
  AffineCoxeter<T> group;
  std::vector<CrookedHalfspace<T>> faces;
  std::vector<AffineMap<T>> generators;  // involutions, or A, A^-1, B, B^-1
  std::vector<int> inverse_of;
  double alpha_residual = 0;             // three-term alpha against the target
  bool faces_disjoint = false;
};

class TamenessError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Locates d in the atlas and builds the crooked domain of the node triple
// whose tile contains it, with each face coefficient a multiple of (1, 1).
// Deep nodes need T = Extended: their words overflow double conditioning.
template <class T>
DomainRealization<T> realize_domain(const FuchsianRep<T>& rep, const TilingAtlas& atlas, const Vec3<double>& d,
                                    FixedPointChoice choice = FixedPointChoice::plus, double eps = 1e-8) {
  using std::abs;
  DomainRealization<T> out;
  out.direction = unit_euclid(d);
  TileLocation where = TileLocation::outside;
  for (std::size_t k = 0; k < atlas.tiles.size(); ++k) {
    const TileLocation l = tile_contains(atlas.tiles[k], out.direction, eps);
    if (l == TileLocation::interior || (l == TileLocation::edge && where != TileLocation::interior) ||
        (l == TileLocation::corner && where == TileLocation::outside)) {
      where = l;
      out.tile = static_cast<int>(k);
      if (l == TileLocation::interior) break;
    }
  }
  if (where == TileLocation::outside) throw TamenessError("not geometrically tame at this depth");
  if (where == TileLocation::corner) throw TamenessError("direction is a tile corner: never proper");
  out.kind = where == TileLocation::edge ? DomainKind::quadrilateral : DomainKind::triangle;

  const Vec3<T> target_base = T(atlas.branch) * out.direction.template cast<T>();
  const Cocycle<T> base = cocycle_from_alpha(rep, target_base, base_triple());
  const BasicTriple node = atlas.tiles[out.tile].node.words;
  for (int r = 0; r < 3; ++r) {
    const BasicTriple w = rotate(node, r);
    const FuchsianRep<T> nrep = rep_for_triple(rep, w);
    const Cocycle<T> nu{evaluate_cocycle(rep, base, w.A()).trans, evaluate_cocycle(rep, base, w.B()).trans};
    const Vec3<T> target = alpha_coordinates(nrep, nu, base_triple());
    const auto ext = coxeter_extension(nrep);
    const auto tri = fundamental_triangle(ext, fixed_point_cycle(ext, choice).n);
    const auto M = corner_matrices(nrep, tri);
    const Mat3<T> cols =
        Mat3<T>::from_columns(M[0].apply(T(1), T(1)), M[1].apply(T(1), T(1)), M[2].apply(T(1), T(1)));
    const Vec3<T> lam = cols.inverse() * target;
    const T scale = max_abs(lam);
    for (int i = 0; i < 3; ++i)
      if (lam[i] < -T(eps) * scale) throw std::domain_error("realize_domain: realized branch has the wrong sign");
    // the atlas already decided interior versus edge; node weights can legitimately
    // span many orders of magnitude, so only an edge picks out a vanishing face
    int zero = -1;
    if (out.kind == DomainKind::quadrilateral) {
      zero = 0;
      for (int i = 1; i < 3; ++i)
        if (lam[i] < lam[zero]) zero = i;
      if (zero != 0) continue;
    }
    out.words = w;
    out.node_alpha = target;
    out.extension = ext;
    out.triangle = tri;
    for (int i = 0; i < 3; ++i) {
      const T h = zero == i ? T(0) : lam[i] / T(2);
      out.u[i] = {h, h};
    }
    out.alpha_residual =
        static_cast<double>(max_abs(Vec3<T>(three_terms(M, out.u) - target)) / std::max(T(1), max_abs(target)));
    if (out.kind == DomainKind::triangle) {
      out.group = affine_coxeter(ext, tri, out.u);
      const auto c = out.group.cit();
      out.faces = {c.face(0), c.face(1), c.face(2)};
      out.generators = {out.group.iota[0], out.group.iota[1], out.group.iota[2]};
      out.inverse_of = {0, 1, 2};
      out.faces_disjoint = cit_disjointness_check(c);
    } else {
      const auto q = edge_quadrilateral(ext, tri, out.u[1], out.u[2]);
      out.group = q.group;
      out.faces.assign(q.faces.begin(), q.faces.end());
      out.generators = {q.group.A, q.group.A.inverse(), q.group.B, q.group.B.inverse()};
      out.inverse_of = {1, 0, 3, 2};
      out.faces_disjoint = q.all_disjoint();
    }
    return out;
  }
  throw std::domain_error("realize_domain: no rotation puts the degenerate face first");
}

}  // namespace margulis
