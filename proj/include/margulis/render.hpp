#pragma once
// Text emitters: key = value configuration, result files, SVG figures of the
// tiling chart and of the ideal-triangle orbit, OBJ meshes.

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "deformation.hpp"

namespace margulis {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  double x = 3, y = 3, z = 3;
  int depth = 4;
  std::uint64_t seed = 1;
  double tolerance = 0;  // 0 keeps each check's own bound
  double lp_margin = 1e-9;
  double clip_radius = 10;
  int words = 4;              // word length for orbit figures and domain sampling
  std::size_t samples = 10000;
  int trials = 200;
  int deformations = 5;
  double box = 4;             // sampling box, in units of the largest vertex offset
  FixedPointChoice fixed_point_choice = FixedPointChoice::plus;
  std::string tiles_out, nielsen_out, domain_out, result_out;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(d)) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return d;
}

inline long long parse_int(const std::string& key, const std::string& v, long long lo) {
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  if (n < lo) throw ConfigError(key + ": must be at least " + std::to_string(lo));
  return n;
}

}  // namespace detail

inline std::vector<double> parse_list(const std::string& key, const std::string& v, std::size_t n) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(detail::parse_double(key, detail::trim(item)));
  if (out.size() != n) throw ConfigError(key + ": expected " + std::to_string(n) + " comma-separated numbers");
  return out;
}

inline void set_config_value(Config& c, const std::string& key, const std::string& v) {
  using detail::parse_double;
  using detail::parse_int;
  if (key == "traces") {
    const auto t = parse_list(key, v, 3);
    c.x = t[0];
    c.y = t[1];
    c.z = t[2];
  } else if (key == "depth") {
    c.depth = static_cast<int>(parse_int(key, v, 0));
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_int(key, v, 0));
  } else if (key == "tolerance") {
    c.tolerance = parse_double(key, v);
    if (!(c.tolerance > 0)) throw ConfigError("tolerance: must be positive");
  } else if (key == "lp_margin") {
    c.lp_margin = parse_double(key, v);
    if (!(c.lp_margin > 0)) throw ConfigError("lp_margin: must be positive");
  } else if (key == "clip_radius") {
    c.clip_radius = parse_double(key, v);
    if (!(c.clip_radius > 0)) throw ConfigError("clip_radius: must be positive");
  } else if (key == "words") {
    c.words = static_cast<int>(parse_int(key, v, 0));
  } else if (key == "samples") {
    c.samples = static_cast<std::size_t>(parse_int(key, v, 1));
  } else if (key == "trials") {
    c.trials = static_cast<int>(parse_int(key, v, 1));
  } else if (key == "deformations") {
    c.deformations = static_cast<int>(parse_int(key, v, 1));
  } else if (key == "box") {
    c.box = parse_double(key, v);
    if (!(c.box > 0)) throw ConfigError("box: must be positive");
  } else if (key == "fixed_point_choice") {
    try {
      c.fixed_point_choice = parse_choice(v);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "tiles_out") {
    c.tiles_out = v;
  } else if (key == "nielsen_out") {
    c.nielsen_out = v;
  } else if (key == "domain_out") {
    c.domain_out = v;
  } else if (key == "result_out") {
    c.result_out = v;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

// Line-oriented `key = value`; '#' starts a comment; repeated keys are errors.
inline Config parse_config(std::istream& in, Config c = {}) {
  std::string line;
  std::map<std::string, int> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (seen.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    seen[key] = lineno;
    try {
      set_config_value(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

inline Config load_config(const std::string& path, Config c = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(c));
}

// ---- result files ----

class ResultFile {
 public:
  void set(const std::string& key, const std::string& v) { lines_.push_back(key + " = " + v); }
  void set(const std::string& key, double v) { set(key, num(v)); }
  void set(const std::string& key, long long v) { set(key, std::to_string(v)); }
  void set(const std::string& key, int v) { set(key, std::to_string(v)); }
  void set(const std::string& key, std::size_t v) { set(key, std::to_string(v)); }
  void set(const std::string& key, bool v) { set(key, std::string(v ? "true" : "false")); }
  void set(const std::string& key, const char* v) { set(key, std::string(v)); }
  void set_array(const std::string& key, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    set(key, s + "]");
  }
  void comment(const std::string& c) { lines_.push_back("# " + c); }

  std::string str() const {
    std::string s;
    for (const auto& l : lines_) s += l + "\n";
    return s;
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }

 private:
  std::vector<std::string> lines_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// ---- SVG ----

class Svg {
 public:
  Svg(double xmin, double ymin, double width, double height, double pixels = 800)
      : xmin_(xmin), ymin_(ymin), w_(width), h_(height), px_(pixels) {}

  void comment(const std::string& c) { body_ += "<!-- " + c + " -->\n"; }
  void polygon(const std::vector<std::array<double, 2>>& pts, const std::string& fill, const std::string& stroke,
               double stroke_width) {
    body_ += "<polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ += (i ? " " : "") + xy(pts[i]);
    body_ += "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"" + f(stroke_width) + "\"/>\n";
  }
  void line(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::string& stroke,
            double stroke_width) {
    const auto p = map(a), q = map(b);
    body_ += "<line x1=\"" + f(p[0]) + "\" y1=\"" + f(p[1]) + "\" x2=\"" + f(q[0]) + "\" y2=\"" + f(q[1]) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + f(stroke_width) + "\"/>\n";
  }
  void circle(const std::array<double, 2>& c, double r, const std::string& stroke, double stroke_width) {
    const auto p = map(c);
    body_ += "<circle cx=\"" + f(p[0]) + "\" cy=\"" + f(p[1]) + "\" r=\"" + f(r * px_ / std::max(w_, h_)) +
             "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + f(stroke_width) + "\"/>\n";
  }

  std::string str() const {
    const double W = px_ * w_ / std::max(w_, h_), H = px_ * h_ / std::max(w_, h_);
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + f(W) + " " + f(H) + "\" width=\"" + f(W) +
           "\" height=\"" + f(H) + "\">\n" + body_ + "</svg>\n";
  }

 private:
  static std::string f(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
  }
  // y grows upwards in the figure, downwards in SVG
  std::array<double, 2> map(const std::array<double, 2>& p) const {
    const double k = px_ / std::max(w_, h_);
    return {(p[0] - xmin_) * k, (ymin_ + h_ - p[1]) * k};
  }
  std::string xy(const std::array<double, 2>& p) const {
    const auto q = map(p);
    return f(q[0]) + "," + f(q[1]);
  }

  double xmin_, ymin_, w_, h_, px_;
  std::string body_;
};

inline std::string tile_fill(std::size_t k) {
  static const char* palette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
                                  "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd"};
  return palette[k % 10];
}

// Line {c . d = 0} inside the chart triangle {d >= 0, sum d = 1}, if it crosses it.
inline std::optional<std::array<std::array<double, 2>, 2>> chart_line(const Vec3<double>& c) {
  std::vector<Vec3<double>> hits;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;  // edge d_i = 0
    const double den = c[j] - c[k];
    if (std::abs(den) < 1e-15) continue;
    const double t = -c[k] / den;  // d_j = t, d_k = 1 - t
    if (t < -1e-12 || t > 1 + 1e-12) continue;
    Vec3<double> d{};
    d[j] = t;
    d[k] = 1 - t;
    bool dup = false;
    for (const auto& h : hits)
      if (euclid_norm(Vec3<double>(h - d)) < 1e-9) dup = true;
    if (!dup) hits.push_back(d);
  }
  if (hits.size() < 2) return std::nullopt;
  return std::array<std::array<double, 2>, 2>{chart(hits[0]), chart(hits[1])};
}

// Base alpha coordinates of the covector alpha_W: alpha_W = c . (alpha_A, alpha_B, alpha_C).
template <class T>
Vec3<double> covector_in_base(const AlphaMap<T>& base, const std::array<T, 6>& row) {
  Vec3<T> r;
  for (int i = 0; i < 3; ++i) {
    T s(0);
    for (int k = 0; k < 6; ++k) s += base.rows[i][k] * row[k];
    r[i] = s;
  }
  return to_double(Vec3<T>(base.gram().inverse() * r));
}

struct TilesFigure {
  std::string svg;
  ResultFile result;
  bool ok = false;
};

inline TilesFigure render_tiles(const Config& c) {
  const auto rep = rep_from_traces<Extended>(Extended(c.x), Extended(c.y), Extended(c.z));
  const TilingAtlas atlas = enumerate_tiles<Extended>(rep, c.depth, c.fixed_point_choice);
  const auto disjoint = tiles_disjoint(atlas);
  const double h = std::sqrt(3.0) / 2;
  Svg svg(-h - 0.05, -0.55, 2 * h + 0.1, 1.6);
  svg.comment("chart: positive branch of the alpha coordinates of (a, b, (ab)^-1), normalized to sum 1;");
  svg.comment("barycentric placement on an equilateral triangle, alpha(a) at the top vertex");
  svg.polygon({chart(Vec3<double>{1, 0, 0}), chart(Vec3<double>{0, 1, 0}), chart(Vec3<double>{0, 0, 1})}, "none",
              "#999999", 1);
  for (std::size_t k = 0; k < atlas.tiles.size(); ++k) {
    const auto& t = atlas.tiles[k];
    svg.comment("tile " + std::to_string(k) + " " + t.node.label[0].str() + " " + t.node.label[1].str() + " " +
                t.node.label[2].str());
    svg.polygon({chart(t.corners[0]), chart(t.corners[1]), chart(t.corners[2])}, tile_fill(k), "#333333", 0.6);
  }
  // zero lines of the primitive covectors carried by the tree
  const AlphaMap<Extended> base = alpha_map(rep, base_triple());
  std::map<FareyFraction, std::string> primitives;
  for (const auto& t : atlas.tiles)
    for (int i = 0; i < 3; ++i) primitives.emplace(t.node.label[i], t.node.words.w[i]);
  int lines = 0;
  for (const auto& [f, w] : primitives) {
    const auto seg = chart_line(covector_in_base(base, alpha_row(rep, w)));
    if (!seg) continue;
    svg.comment("alpha(" + w + ") = 0, slope " + f.str());
    svg.line((*seg)[0], (*seg)[1], "#b2182b", 0.4);
    ++lines;
  }
  std::vector<std::array<double, 2>> outline;
  for (const auto& d : atlas.boundary_corners) outline.push_back(chart(d));
  if (!outline.empty()) svg.polygon(outline, "none", "#000000", 1.5);

  TilesFigure out;
  out.svg = svg.str();
  const int expected_edges = 3 * (1 << c.depth);
  const std::size_t expected_tiles = c.depth == 0 ? 1 : 3 * (std::size_t(1) << c.depth) - 2;
  auto& r = out.result;
  r.comment("tiling of the positive branch of the deformation space");
  r.set("traces", ResultFile::num(c.x) + "," + ResultFile::num(c.y) + "," + ResultFile::num(c.z));
  r.set("depth", c.depth);
  r.set("tiles", atlas.tiles.size());
  r.set("expected_tiles", expected_tiles);
  r.set("boundary_edges", atlas.boundary_edges);
  r.set("expected_boundary_edges", expected_edges);
  r.set("convex", atlas.convex);
  r.set("min_turn", atlas.min_turn);
  r.set("max_turn", atlas.max_turn);
  r.set("in_positive_cone", atlas.in_positive_cone);
  r.set("max_shared_corner_error", atlas.max_shared_edge_error);
  r.set("realized_branch_sign", atlas.branch);
  r.set("tile_pairs", disjoint.pairs);
  r.set("tile_overlaps", disjoint.violations.size());
  r.set("covector_lines", lines);
  out.ok = atlas.tiles.size() == expected_tiles && atlas.boundary_edges == expected_edges && atlas.convex &&
           atlas.in_positive_cone && disjoint.violations.empty();
  r.set("status", out.ok ? "pass" : "fail");
  return out;
}

struct NielsenFigure {
  std::string svg;
  std::size_t triangles = 0;
  double max_radius = 0;  // largest Klein radius among vertices
};

// Orbit of the fundamental ideal triangle under involution words, Klein model.
inline NielsenFigure render_nielsen(const Config& c) {
  const auto rep = rep_from_traces(c.x, c.y, c.z);
  const auto ext = coxeter_extension(rep);
  const auto tri = fundamental_triangle(ext, fixed_point_cycle(ext, c.fixed_point_choice).n);
  Svg svg(-1.05, -1.05, 2.1, 2.1);
  svg.comment("Klein projection (x/z, y/z) of the hyperboloid model");
  svg.circle({0, 0}, 1, "#000000", 1);
  NielsenFigure out;
  std::set<std::vector<long long>> seen;
  auto key = [](const Mat3<double>& m) {
    const double s = std::max(1.0, max_abs(m));
    std::vector<long long> k;
    for (auto& row : m.m)
      for (double e : row) k.push_back(std::llround(e / s * 1e9));
    return k;
  };
  std::vector<std::pair<Mat3<double>, int>> layer{{Mat3<double>::identity(), -1}};
  for (int len = 0; len <= c.words; ++len) {
    std::vector<std::pair<Mat3<double>, int>> next;
    for (const auto& [g, last] : layer) {
      if (!seen.insert(key(g)).second) continue;
      std::vector<std::array<double, 2>> pts;
      for (const auto& v : tri.tri.vertices) {
        const Vec3<double> w = g * v;
        const std::array<double, 2> p{w.x / w.z, w.y / w.z};
        out.max_radius = std::max(out.max_radius, std::hypot(p[0], p[1]));
        pts.push_back(p);
      }
      svg.polygon(pts, len == 0 ? "#fdb462" : "#e8eef7", "#2c3e50", 0.5);
      ++out.triangles;
      if (len < c.words)
        for (int k = 0; k < 3; ++k)
          if (k != last) next.push_back({g * ext.iota[k], k});
    }
    layer = std::move(next);
  }
  out.svg = svg.str();
  return out;
}

// ---- OBJ ----

inline std::string to_obj(const Mesh& m, const std::string& header = {}) {
  std::string s;
  if (!header.empty()) {
    std::stringstream hs(header);
    std::string l;
    while (std::getline(hs, l)) s += "# " + l + "\n";
  }
  char buf[96];
  for (const auto& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
    s += buf;
  }
  std::size_t g = 0;
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    while (g < m.groups.size() && m.groups[g].second == static_cast<int>(f)) s += "g " + m.groups[g++].first + "\n";
    std::snprintf(buf, sizeof buf, "f %d %d %d\n", m.faces[f][0] + 1, m.faces[f][1] + 1, m.faces[f][2] + 1);
    s += buf;
  }
  return s;
}

inline Mesh parse_obj(std::istream& in) {
  Mesh m;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3<double> v;
      if (!(ls >> v.x >> v.y >> v.z)) throw std::runtime_error("parse_obj: bad vertex line");
      m.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<int, 3> f{};
      if (!(ls >> f[0] >> f[1] >> f[2])) throw std::runtime_error("parse_obj: bad face line");
      for (auto& i : f) {
        if (i < 1 || i > static_cast<int>(m.vertices.size())) throw std::runtime_error("parse_obj: index out of range");
        --i;
      }
      m.faces.push_back(f);
    } else if (tag == "g") {
      std::string name;
      ls >> name;
      m.begin_group(name);
    } else {
      throw std::runtime_error("parse_obj: unknown record '" + tag + "'");
    }
  }
  return m;
}

}  // namespace margulis
