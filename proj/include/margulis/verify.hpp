#pragma once
// Property suites shared by the acceptance runner and `margulis_cli verify`.
// Each check reports the worst observed residual against its bound so a
// failure names the invariant that broke.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "deformation.hpp"

namespace margulis::verify {

struct Check {
  std::string name;
  bool pass = false;
  double worst = 0;  // largest residual, or a violation count
  double bound = 0;
  std::string note;
};

struct Tolerances {
  double identity = 1e-9;     // kernel identities, round trips, alpha powers
  double gram = 1e-8;
  double alpha = 1e-8;        // three-way agreement, hinge incidences
  double rank_one = 1e-8;
  double zero_row = 1e-10;
  double flip = 1e-7;

  static Tolerances uniform(double t) { return {t, t, t, t, t, t}; }
};

struct Fixture {
  double x = 3, y = 3, z = 3;
  FixedPointChoice choice = FixedPointChoice::plus;
  FuchsianRep<double> rep;
  CoxeterExtension<double> ext;
  PointedTriangle<double> tri;

  static Fixture make(double x, double y, double z, FixedPointChoice c = FixedPointChoice::plus) {
    Fixture f{x, y, z, c, rep_from_traces(x, y, z), {}, {}};
    f.ext = coxeter_extension(f.rep);
    f.tri = fundamental_triangle(f.ext, fixed_point_cycle(f.ext, c).n);
    return f;
  }
};

namespace detail {

inline Check finish(std::string name, double worst, double bound, std::string note = {}) {
  return {std::move(name), worst < bound, worst, bound, std::move(note)};
}

inline Check count(std::string name, std::size_t bad, std::string note = {}) {
  return {std::move(name), bad == 0, static_cast<double>(bad), 0.5, std::move(note)};
}

inline Vec3<double> random_vec(CounterRng& r, double lo = -1, double hi = 1) {
  return {r.uniform(lo, hi), r.uniform(lo, hi), r.uniform(lo, hi)};
}

inline Vec3<double> random_timelike(CounterRng& r) {
  const double th = r.uniform(0, 2 * M_PI), rad = r.uniform(0, 0.9);
  return unit_future_timelike(Vec3<double>{rad * std::cos(th), rad * std::sin(th), 1.0});
}

// Cusps on the unit circle, pairwise at least 0.3 radians apart.
inline IdealTriangle<double> random_ideal_triangle(CounterRng& r) {
  const double th = r.uniform(0, 2 * M_PI), g1 = r.uniform(0.3, 2.9), g2 = r.uniform(0.3, 2.9);
  auto at = [](double t) { return Vec3<double>{std::cos(t), std::sin(t), 1.0}; };
  return ideal_triangle_from_cusps(at(th), at(th + g1), at(th + g1 + g2));
}

inline VertexCoefficients<double> random_coefficients(CounterRng& r, double lo = 0.1, double hi = 10) {
  VertexCoefficients<double> u;
  for (auto& p : u) p = {r.uniform(lo, hi), r.uniform(lo, hi)};
  return u;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace detail

inline Check cross_product_identity(CounterRng rng, int n, double tol) {
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const auto u1 = detail::random_vec(rng), v1 = detail::random_vec(rng);
    const auto u2 = detail::random_vec(rng), v2 = detail::random_vec(rng);
    const double r = inner(cross(u1, v1), cross(u2, v2)) + inner(u1, u2) * inner(v1, v2) -
                     inner(u1, v2) * inner(v1, u2);
    worst = std::max(worst, std::abs(r));
  }
  return detail::finish("kernel.cross_product_identity", worst, tol);
}

// Linear involutions about spacelike or timelike axes, and particle involutions
// about random points: square to the identity and preserve the inner product.
inline Check involutions(CounterRng rng, int n, double tol) {
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3<double> axis = (i % 2) ? detail::random_timelike(rng) : unit_spacelike(Vec3<double>{
                                                                         rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(-0.4, 0.4)});
    const Mat3<double> s = linear_involution(axis);
    worst = std::max(worst, max_abs_diff(s * s, Mat3<double>::identity()));
    const auto a = detail::random_vec(rng), b = detail::random_vec(rng);
    worst = std::max(worst, std::abs(inner(s * a, s * b) - inner(a, b)));
    worst = std::max(worst, euclid_norm(Vec3<double>(s * axis - axis)));
    const Point<double> p{detail::random_vec(rng, -5, 5)};
    const auto g = particle_involution(p, detail::random_timelike(rng));
    const Point<double> w{detail::random_vec(rng, -5, 5)};
    worst = std::max(worst, euclid_norm(Vec3<double>(g(g(w)) - w)));
    worst = std::max(worst, euclid_norm(Vec3<double>(g(p) - p)));
  }
  return detail::finish("kernel.involutions", worst, tol);
}

inline Check ideal_triangle_gram(CounterRng rng, int n, double tol) {
  const Mat3<double> want{{{{1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}}};
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const auto t = detail::random_ideal_triangle(rng);
    worst = std::max(worst, max_abs_diff(gram(t.sides), want));
  }
  return detail::finish("hyperbolic.ideal_triangle_gram", worst, tol);
}

inline Check cit_round_trip(CounterRng rng, int n, double tol) {
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const auto tri = detail::random_ideal_triangle(rng);
    const Point<double> o{detail::random_vec(rng, -5, 5)};
    const auto u = detail::random_coefficients(rng);
    const auto a = analyze_cit(cit_from_coefficients(tri.sides, o, u));
    worst = std::max(worst, euclid_norm(Vec3<double>(a.center - o)) / std::max(1.0, euclid_norm(o.c)));
    for (int k = 0; k < 3; ++k) {
      worst = std::max(worst, detail::rel(a.u[k].first, u[k].first));
      worst = std::max(worst, detail::rel(a.u[k].second, u[k].second));
    }
    if (!a.nondegenerate) worst = std::max(worst, 1.0);
  }
  return detail::finish("crooked.cit_round_trip", worst, tol);
}

// Positive coefficients give pairwise disjoint faces; flipping the sign of
// one coefficient must produce an overlap the decider finds.
inline std::vector<Check> cit_disjointness(const Fixture& f, CounterRng rng, int n, DisjointnessOptions opt = {}) {
  std::size_t missed = 0, undetected = 0;
  for (int i = 0; i < n; ++i) {
    const Point<double> o{detail::random_vec(rng, -2, 2)};
    auto u = detail::random_coefficients(rng);
    if (!cit_disjointness_check(cit_from_coefficients(f.tri.tri.sides, o, u), opt)) ++missed;
    const int face = static_cast<int>(rng.uniform(0, 3));
    auto& c = rng.uniform() < 0.5 ? u[face].first : u[face].second;
    c = -c;
    if (cit_disjointness_check(cit_from_coefficients(f.tri.tri.sides, o, u), opt)) ++undetected;
  }
  std::vector<Check> out;
  out.push_back(detail::count("crooked.positive_coefficients_disjoint", missed, std::to_string(n) + " trials"));
  out.push_back(detail::count("crooked.planted_overlap_detected", undetected, std::to_string(n) + " trials"));
  return out;
}

// Zero coefficients at one face: the face meets its two neighbours.
inline Check edge_case_faces_meet(const Fixture& f) {
  VertexCoefficients<double> u{{{0, 0}, {0.4, 2.1}, {1.1, 0.5}}};
  const auto c = affine_coxeter(f.ext, f.tri, u).cit();
  std::size_t bad = 0;
  if (!closed_halfspaces_meet(c.face(0), c.face(1))) ++bad;
  if (!closed_halfspaces_meet(c.face(0), c.face(2))) ++bad;
  if (closed_halfspaces_meet(c.face(1), c.face(2))) ++bad;
  return detail::count("crooked.edge_face_contacts", bad);
}

// Direct Margulis invariants against the vertex-triple formula and the corner matrices.
inline Check alpha_agreement(const Fixture& f, CounterRng rng, int n, double tol) {
  const auto M = corner_matrices(f.rep, f.tri);
  const auto [a0, b0, c0] = neutral_triple(f.rep);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const auto u = detail::random_coefficients(rng);
    const auto ac = affine_coxeter(f.ext, f.tri, u);
    const Vec3<double> direct{margulis_invariant(ac.A), margulis_invariant(ac.B), margulis_invariant(ac.C)};
    const Vec3<double> lemma = alpha_via_lemma(ac.q, a0, b0, c0);
    const Vec3<double> three = three_terms(M, u);
    const Vec3<double> rows = alpha_coordinates(f.rep, ac.cocycle, base_triple());
    const double s = std::max(1.0, max_abs(direct));
    worst = std::max({worst, max_abs(Vec3<double>(lemma - direct)) / s, max_abs(Vec3<double>(three - direct)) / s,
                      max_abs(Vec3<double>(rows - direct)) / s});
  }
  return detail::finish("deformation.alpha_three_way", worst, tol);
}

// Evaluated in extended precision: the translations of g^-3 are large enough
// that double rounding alone reaches 1e-9 relative.
inline Check alpha_powers(const Fixture& f, CounterRng rng, int n, double tol) {
  using X = Extended;
  const auto rep = rep_from_traces<X>(X(f.x), X(f.y), X(f.z));
  const auto ext = coxeter_extension(rep);
  const auto tri = fundamental_triangle(ext, fixed_point_cycle(ext, f.choice).n);
  auto rel = [](const X& a, const X& b) { return static_cast<double>(abs(a - b) / std::max(X(1), X(abs(b)))); };
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const auto ud = detail::random_coefficients(rng);
    VertexCoefficients<X> u;
    for (int k = 0; k < 3; ++k) u[k] = {X(ud[k].first), X(ud[k].second)};
    const auto ac = affine_coxeter(ext, tri, u);
    const Point<X> origin{detail::random_vec(rng, -10, 10).cast<X>()};
    for (const AffineMap<X>& g : {ac.A, ac.B, ac.C, ac.A * ac.B.inverse()}) {
      const X a = margulis_invariant(g);
      worst = std::max(worst, rel(margulis_invariant(g, origin), a));
      worst = std::max(worst, rel(margulis_invariant(g.inverse()), a));
      AffineMap<X> p = g;
      for (int k = 2; k <= 3; ++k) {
        p = p * g;
        worst = std::max(worst, rel(margulis_invariant(p), X(k) * a));
        worst = std::max(worst, rel(margulis_invariant(p.inverse()), X(k) * a));
      }
    }
  }
  return detail::finish("deformation.alpha_inverse_power_origin", worst, tol);
}

// Corner matrices at every node to the given depth, in extended precision.
// Each is rebuilt column by column from direct Margulis invariants of the
// affine group with a single unit coefficient, then checked for rank one, for
// its vanishing row, and against the closed form.
inline std::vector<Check> rank_one(const Fixture& f, int depth, double tol, double zero_tol) {
  using X = Extended;
  const auto rep = rep_from_traces<X>(X(f.x), X(f.y), X(f.z));
  double ratio = 0, zero = 0, closed = 0;
  for (const auto& nd : enumerate_tree(depth)) {
    const auto nrep = rep_for_triple(rep, nd.words);
    const auto ext = coxeter_extension(nrep);
    const auto tri = fundamental_triangle(ext, fixed_point_cycle(ext, f.choice).n);
    const auto M = corner_matrices(nrep, tri);
    const auto [na, nb, nc] = neutral_triple(nrep);
    for (int i = 0; i < 3; ++i) {
      CornerMatrix<X> direct;
      for (int col = 0; col < 2; ++col) {
        VertexCoefficients<X> u{};
        (col == 0 ? u[i].first : u[i].second) = X(1);
        const auto ac = affine_coxeter(ext, tri, u);
        const Vec3<X> alpha{inner(na, ac.A.trans), inner(nb, ac.B.trans), inner(nc, ac.C.trans)};
        for (int r = 0; r < 3; ++r) direct.m[r][col] = alpha[r] / X(2);
      }
      X big(0), diff(0);
      for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 2; ++col) {
          big = std::max(big, X(abs(direct.m[r][col])));
          diff = std::max(diff, X(abs(direct.m[r][col] - M[i].m[r][col])));
        }
      const int zr = kCornerZeroRow[i];
      const X z = std::max(abs(direct.m[zr][0]), abs(direct.m[zr][1])) / big;
      ratio = std::max(ratio, static_cast<double>(direct.singular_ratio()));
      zero = std::max(zero, static_cast<double>(z));
      closed = std::max(closed, static_cast<double>(diff / big));
    }
  }
  return {detail::finish("deformation.corner_rank_one", ratio, tol),
          detail::finish("deformation.corner_zero_row", zero, zero_tol),
          detail::finish("deformation.corner_closed_form", closed, tol)};
}

struct TilingSummary {
  std::vector<Check> checks;
  TilingAtlas deepest;
};

inline TilingSummary tiling(const Fixture& f, int max_depth, int disjoint_depth) {
  TilingSummary s;
  std::ostringstream bad;
  std::size_t wrong = 0;
  const auto rep = rep_from_traces<Extended>(Extended(f.x), Extended(f.y), Extended(f.z));
  for (int n = 0; n <= max_depth; ++n) {
    auto atlas = enumerate_tiles<Extended>(rep, n, f.choice);
    const std::size_t tiles = n == 0 ? 1 : 3 * (std::size_t(1) << n) - 2;
    const int edges = 3 * (1 << n);
    if (atlas.tiles.size() != tiles || atlas.boundary_edges != edges || !atlas.convex || !atlas.in_positive_cone) {
      ++wrong;
      bad << " depth " << n << ": " << atlas.tiles.size() << " tiles, " << atlas.boundary_edges << " edges"
          << (atlas.convex ? "" : ", not convex");
    }
    if (n == disjoint_depth) {
      const auto r = tiles_disjoint(atlas);
      s.checks.push_back(detail::count("deformation.tile_interiors_disjoint", r.violations.size(),
                                       std::to_string(r.pairs) + " pairs at depth " + std::to_string(n)));
    }
    if (n == max_depth) s.deepest = std::move(atlas);
  }
  s.checks.insert(s.checks.begin(), detail::count("deformation.tiling_counts_convex", wrong, bad.str()));
  return s;
}

inline Check flip_identity(const Fixture& f, int depth, double tol) {
  double worst = 0;
  bool positive = true;
  const auto nodes = enumerate_tree(depth);
  for (const auto& nd : nodes) {
    if (nd.parent < 0) continue;
    const auto r = flip_covector_identity(f.rep, nodes[nd.parent].words, nd.slot);
    worst = std::max(worst, r.residual);
    if (!(r.a > 0 && r.b > 0 && r.c > 0)) positive = false;
  }
  Check c = detail::finish("deformation.flip_covector_identity", worst, tol);
  if (!positive) {
    c.pass = false;
    c.note = "nonpositive coefficient";
  }
  return c;
}

// Random interior deformations of random tiles: sampled orbit points never
// land back in the open domain.
inline Check domain_sampling(const Fixture& f, const TilingAtlas& atlas, CounterRng rng, int deformations,
                             int max_len, std::size_t samples, double box) {
  const auto rep = rep_from_traces<Extended>(Extended(f.x), Extended(f.y), Extended(f.z));
  std::size_t violations = 0, failures = 0, total = 0;
  for (int k = 0; k < deformations; ++k) {
    const auto& t = atlas.tiles[static_cast<std::size_t>(rng.uniform(0, double(atlas.tiles.size())))];
    const Vec3<double> d =
        t.corners[0] * rng.uniform(0.1, 1) + t.corners[1] * rng.uniform(0.1, 1) + t.corners[2] * rng.uniform(0.1, 1);
    const auto dom = realize_domain(rep, atlas, d, f.choice);
    if (!dom.faces_disjoint || dom.kind != DomainKind::triangle) ++failures;
    // sample where all ideal triangles look alike, so deep nodes stay well conditioned
    auto faces = dom.faces;
    auto gens = dom.generators;
    const auto frame = standard_position(dom.triangle.tri, analyze_cit(dom.group.cit()).center);
    conjugate_domain(frame, faces, gens);
    double scale = 1;
    for (const auto& h : faces) scale = std::max(scale, static_cast<double>(euclid_norm(h.vertex.c)));
    const auto r = verify_fundamental_domain(faces, gens, dom.inverse_of, max_len, samples, rng.split(k)(),
                                             box * scale);
    violations += r.violations;
    total += r.samples;
    if (r.samples < samples) ++failures;
  }
  return detail::count("deformation.fundamental_domain_sampling", violations + failures,
                       std::to_string(total) + " samples");
}

// alpha(A) > 0 > alpha(B): neither the direction nor its antipode is in any tile.
inline Check opposite_sign(const TilingAtlas& atlas) {
  std::size_t hits = 0;
  for (const Vec3<double>& d : {Vec3<double>{1.0, -1.0, 0.3}, Vec3<double>{2.0, -0.5, -1.0}}) {
    for (const auto& v : {d, Vec3<double>(-d)})
      for (const auto& t : atlas.tiles)
        if (tile_contains(t, v) != TileLocation::outside) ++hits;
  }
  return detail::count("deformation.opposite_sign_outside_tiles", hits,
                       std::to_string(atlas.tiles.size()) + " tiles");
}

inline Check edge_quadrilaterals(const Fixture& f, CounterRng rng, int n, double tol) {
  double worst = 0;
  std::size_t bad = 0;
  for (int i = 0; i < n; ++i) {
    const std::pair<double, double> u1{rng.uniform(0.1, 10), rng.uniform(0.1, 10)};
    const std::pair<double, double> u2{rng.uniform(0.1, 10), rng.uniform(0.1, 10)};
    const auto q = edge_quadrilateral(f.ext, f.tri, u1, u2);
    worst = std::max({worst, q.hinge_n_residual / std::max(1.0, u2.second),
                      q.hinge_i0n_residual / std::max(1.0, u1.first)});
    if (!q.all_disjoint() || !q.hinge_rays_oriented) ++bad;
  }
  const auto degenerate = edge_quadrilateral(f.ext, f.tri, {0.0, 1.5}, {1.2, 0.6});
  if (degenerate.all_disjoint()) ++bad;
  Check c = detail::finish("deformation.edge_quadrilaterals", worst, tol);
  if (bad) {
    c.pass = false;
    c.note = std::to_string(bad) + " disjointness failures";
  }
  return c;
}

// Labels recomputed from the parent by Farey arithmetic, independently of the words.
inline Check farey_tree(int depth) {
  const auto nodes = enumerate_tree(depth);
  std::size_t bad = nodes.size() == 1 + 3 * ((std::size_t(1) << depth) - 1) ? 0 : 1;
  std::vector<FareyTriple> oracle(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& nd = nodes[k];
    if (nd.parent < 0) {
      oracle[k] = {FareyFraction(1, 0), FareyFraction(0, 1), FareyFraction(1, 1)};
    } else {
      FareyTriple t = oracle[nd.parent];
      // the flipped slot of the parent is the word that is replaced
      const FareyFraction old = nodes[nd.parent].label[nd.slot];
      int idx = -1;
      for (int i = 0; i < 3; ++i)
        if (t[i] == old) idx = i;
      if (idx < 0) {
        ++bad;
        continue;
      }
      const auto [s, d] = farey_children(t[(idx + 1) % 3], t[(idx + 2) % 3]);
      t[idx] = s == old ? d : s;
      oracle[k] = t;
    }
    const auto lab = margulis::detail::label_key(nd.label);
    if (lab != margulis::detail::label_key(oracle[k])) ++bad;
    for (int i = 0; i < 3; ++i) {
      if (!(word_fraction(nd.words.w[i]) == nd.label[i])) ++bad;
      if (intersection_number(nd.label[i], nd.label[(i + 1) % 3]) != 1) ++bad;
    }
    const auto m0 = mod2_class(nd.label[0]), m1 = mod2_class(nd.label[1]), m2 = mod2_class(nd.label[2]);
    if (m0 == m1 || m1 == m2 || m0 == m2) ++bad;
    if (!nd.words.valid()) ++bad;
  }
  return detail::count("farey.tree", bad, std::to_string(nodes.size()) + " nodes");
}

struct SuiteParams {
  double x = 3, y = 3, z = 3;
  FixedPointChoice choice = FixedPointChoice::plus;
  int depth = 4;
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  int trials = 200;
  int words = 4;
  int deformations = 5;
  double box = 4;
  double margin = 1e-9;
  std::optional<double> tolerance;  // replaces every residual bound
};

// The full property suite for one trace triple.
inline std::vector<Check> run_suites(const SuiteParams& p) {
  const Tolerances tol = p.tolerance ? Tolerances::uniform(*p.tolerance) : Tolerances{};
  const CounterRng root(p.seed);
  const auto f = Fixture::make(p.x, p.y, p.z, p.choice);
  DisjointnessOptions opt;
  opt.margin = p.margin;
  std::vector<Check> out;
  auto add = [&](std::vector<Check> v) { out.insert(out.end(), v.begin(), v.end()); };
  out.push_back(cross_product_identity(root.split(1), 10000, tol.identity));
  out.push_back(involutions(root.split(2), 1000, tol.identity));
  out.push_back(ideal_triangle_gram(root.split(3), 50, tol.gram));
  out.push_back(cit_round_trip(root.split(4), p.trials, tol.identity));
  add(cit_disjointness(f, root.split(5), p.trials, opt));
  out.push_back(alpha_agreement(f, root.split(6), p.trials, tol.alpha));
  out.push_back(alpha_powers(f, root.split(7), 50, tol.identity));
  add(rank_one(f, std::min(p.depth, 4), tol.rank_one, tol.zero_row));
  auto t = tiling(f, p.depth, p.depth);
  add(t.checks);
  out.push_back(flip_identity(f, std::min(p.depth, 2), tol.flip));
  out.push_back(domain_sampling(f, t.deepest, root.split(9), p.deformations, p.words, p.samples, p.box));
  out.push_back(opposite_sign(t.deepest));
  out.push_back(edge_quadrilaterals(f, root.split(10), std::max(1, p.trials / 2), tol.alpha));
  out.push_back(farey_tree(std::max(p.depth, 1)));
  return out;
}

inline std::string format(const Check& c) {
  std::ostringstream os;
  os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  worst=" << c.worst << " bound=" << c.bound;
  if (!c.note.empty()) os << "  (" << c.note << ")";
  return os.str();
}

}  // namespace margulis::verify
