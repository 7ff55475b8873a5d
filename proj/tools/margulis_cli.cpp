// margulis_cli: tiles | nielsen | domain | verify | farey
// Exit status: 0 success, 1 verification failure, 2 invalid input.
#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include <margulis/render.hpp>
#include <margulis/verify.hpp>

using namespace margulis;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2 };

struct Overrides {
  std::string config, traces, choice, out, result;
  int depth = -1, words = -1;
  long long seed = -1;
  double clip = 0;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key = value configuration file");
  cmd->add_option("--traces", o.traces, "trace triple x,y,z");
  cmd->add_option("--choice", o.choice, "fixed point choice: plus or minus");
}

Config resolve(const Overrides& o) {
  Config c = o.config.empty() ? Config{} : load_config(o.config);
  if (!o.traces.empty()) set_config_value(c, "traces", o.traces);
  if (!o.choice.empty()) set_config_value(c, "fixed_point_choice", o.choice);
  if (o.depth >= 0) c.depth = o.depth;
  if (o.words >= 0) c.words = o.words;
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  if (o.clip > 0) c.clip_radius = o.clip;
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_text(path, text);
}

int cmd_tiles(const Overrides& o) {
  Config c = resolve(o);
  const auto fig = render_tiles(c);
  emit(o.out.empty() ? c.tiles_out : o.out, fig.svg);
  const std::string result = o.result.empty() ? c.result_out : o.result;
  if (result.empty()) std::cerr << fig.result.str();
  else write_text(result, fig.result.str());
  return fig.ok ? kOk : kFailed;
}

int cmd_nielsen(const Overrides& o) {
  const Config c = resolve(o);
  const auto fig = render_nielsen(c);
  emit(o.out.empty() ? c.nielsen_out : o.out, fig.svg);
  std::cerr << "triangles = " << fig.triangles << "\nmax_klein_radius = " << ResultFile::num(fig.max_radius) << "\n";
  return kOk;
}

struct DomainArgs {
  std::vector<double> u, alpha;
};

Mesh label_groups(Mesh m, const std::string& prefix) {
  for (auto& g : m.groups) g.first = prefix + "_" + g.first;
  return m;
}

CrookedHalfspace<double> to_double_face(const CrookedHalfspace<Extended>& h) {
  return {{to_double(h.frame.s), to_double(h.frame.s_minus), to_double(h.frame.s_plus)}, {to_double(h.vertex.c)}};
}

template <class T>
void report_group(ResultFile& r, const AffineCoxeter<T>& group) {
  const auto analysis = analyze_cit(group.cit());
  const auto c = to_double(analysis.center.c);
  r.set_array("center", {c.x, c.y, c.z});
  for (int i = 0; i < 3; ++i)
    r.set_array("slab_" + std::to_string(i),
                {static_cast<double>(analysis.u[i].first), static_cast<double>(analysis.u[i].second)});
  r.set_array("alpha", {static_cast<double>(margulis_invariant(group.A)), static_cast<double>(margulis_invariant(group.B)),
                        static_cast<double>(margulis_invariant(group.C))});
}

int cmd_domain(const Overrides& o, const DomainArgs& a) {
  const Config c = resolve(o);
  if (a.u.empty() == a.alpha.empty()) throw ConfigError("domain: give exactly one of --u or --alpha");
  ResultFile r;
  r.set("traces", ResultFile::num(c.x) + "," + ResultFile::num(c.y) + "," + ResultFile::num(c.z));
  DisjointnessOptions opt;
  opt.margin = c.lp_margin;

  std::vector<CrookedHalfspace<double>> faces;
  bool disjoint = false;
  const auto f = verify::Fixture::make(c.x, c.y, c.z, c.fixed_point_choice);
  if (!a.u.empty()) {
    VertexCoefficients<double> u;
    AffineCoxeter<double> group;
    for (int i = 0; i < 3; ++i) u[i] = {a.u[2 * i], a.u[2 * i + 1]};
    const bool edge = u[0].first == 0 && u[0].second == 0 && u[1].first >= 0 && u[1].second >= 0 &&
                      u[2].first >= 0 && u[2].second >= 0;
    if (edge) {
      const auto q = edge_quadrilateral(f.ext, f.tri, u[1], u[2], opt);
      faces.assign(q.faces.begin(), q.faces.end());
      disjoint = q.all_disjoint();
      group = q.group;
      r.set("hinge_n_residual", q.hinge_n_residual);
      r.set("hinge_i0n_residual", q.hinge_i0n_residual);
    } else {
      group = affine_coxeter(f.ext, f.tri, u);
      const auto cit = group.cit();
      faces = {cit.face(0), cit.face(1), cit.face(2)};
      disjoint = cit_disjointness_check(cit, opt);
    }
    r.set("superbasis", base_triple().A() + "," + base_triple().B() + "," + base_triple().C());
    report_group(r, group);
  } else {
    // deep nodes lose the determinant in double, so the whole realization runs extended
    const auto atlas = enumerate_tiles(c.x, c.y, c.z, c.depth, c.fixed_point_choice);
    const auto rep = rep_from_traces<Extended>(Extended(c.x), Extended(c.y), Extended(c.z));
    const auto d = realize_domain(rep, atlas, {a.alpha[0], a.alpha[1], a.alpha[2]}, c.fixed_point_choice);
    for (const auto& h : d.faces) faces.push_back(to_double_face(h));
    disjoint = d.faces_disjoint;
    r.set("tile", d.tile);
    r.set("superbasis", d.words.A() + "," + d.words.B() + "," + d.words.C());
    r.set("location", d.kind == DomainKind::triangle ? "interior" : "edge");
    r.set("three_term_residual", static_cast<double>(d.alpha_residual));
    report_group(r, d.group);
  }
  r.set("kind", faces.size() == 3 ? "crooked_ideal_triangle" : "crooked_ideal_quadrilateral");
  r.set("faces", faces.size());
  r.set("faces_disjoint", disjoint);

  Mesh mesh;
  for (std::size_t i = 0; i < faces.size(); ++i)
    mesh.append(label_groups(mesh_crooked_plane(faces[i], c.clip_radius), "face" + std::to_string(i)));
  std::ostringstream header;
  header << "crooked fundamental domain, " << faces.size() << " faces, clip radius " << c.clip_radius
         << " about each vertex";
  emit(o.out.empty() ? c.domain_out : o.out, to_obj(mesh, header.str()));
  const std::string result = o.result.empty() ? c.result_out : o.result;
  if (result.empty()) std::cerr << r.str();
  else write_text(result, r.str());
  return disjoint ? kOk : kFailed;
}

int cmd_verify(const Overrides& o) {
  const Config c = resolve(o);
  verify::SuiteParams p;
  p.x = c.x;
  p.y = c.y;
  p.z = c.z;
  p.choice = c.fixed_point_choice;
  p.depth = c.depth;
  p.seed = c.seed;
  p.samples = c.samples;
  p.trials = c.trials;
  p.words = c.words;
  p.deformations = c.deformations;
  p.box = c.box;
  p.margin = c.lp_margin;
  if (c.tolerance > 0) p.tolerance = c.tolerance;
  const auto checks = verify::run_suites(p);
  ResultFile r;
  std::size_t failed = 0;
  for (const auto& ch : checks) {
    std::cout << verify::format(ch) << "\n";
    r.set(ch.name, ch.pass ? "pass" : "fail");
    if (!ch.pass) ++failed;
  }
  r.set("failed", failed);
  std::cout << failed << " of " << checks.size() << " checks failed\n";
  const std::string result = o.result.empty() ? c.result_out : o.result;
  if (!result.empty()) write_text(result, r.str());
  return failed ? kFailed : kOk;
}

int cmd_farey(int depth, const std::string& out) {
  std::ostringstream s;
  s << "# index depth parent slot labels words\n";
  const auto nodes = enumerate_tree(depth);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& n = nodes[k];
    const auto lab = canonical_order(n.label);
    s << k << " " << n.depth << " " << n.parent << " " << n.slot << " " << lab[0].str() << " " << lab[1].str() << " "
      << lab[2].str() << " " << n.words.A() << " " << n.words.B() << " " << n.words.C() << "\n";
  }
  emit(out, s.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crooked fundamental domains and the tiling of proper affine deformations"};
  app.require_subcommand(1);
  Overrides o;
  DomainArgs da;
  int farey_depth = 8;

  auto* tiles = app.add_subcommand("tiles", "SVG of the tiling in the chart plane, plus a result file");
  add_common(tiles, o);
  tiles->add_option("--depth", o.depth, "superbasis tree depth");
  tiles->add_option("--out", o.out, "SVG path (- for stdout)");
  tiles->add_option("--result", o.result, "result file path");

  auto* nielsen = app.add_subcommand("nielsen", "SVG of the ideal triangle orbit in the Klein model");
  add_common(nielsen, o);
  nielsen->add_option("--words", o.words, "maximal involution word length");
  nielsen->add_option("--out", o.out, "SVG path (- for stdout)");

  auto* domain = app.add_subcommand("domain", "OBJ mesh and report of a crooked fundamental domain");
  add_common(domain, o);
  domain->add_option("--u", da.u, "six vertex coefficients u+0,u-0,u+1,u-1,u+2,u-2")->delimiter(',')->expected(6);
  domain->add_option("--alpha", da.alpha, "target Margulis invariants of a, b, (ab)^-1")->delimiter(',')->expected(3);
  domain->add_option("--depth", o.depth, "tree depth searched for a containing tile");
  domain->add_option("--clip", o.clip, "clip radius of each face mesh");
  domain->add_option("--out", o.out, "OBJ path (- for stdout)");
  domain->add_option("--result", o.result, "result file path");

  auto* ver = app.add_subcommand("verify", "run every property suite; nonzero exit on failure");
  add_common(ver, o);
  ver->add_option("--seed", o.seed, "override the sampling seed");
  ver->add_option("--result", o.result, "result file path");

  auto* farey = app.add_subcommand("farey", "superbasis tree listing");
  farey->add_option("--depth", farey_depth, "tree depth")->check(CLI::Range(0, 30));
  farey->add_option("--out", o.out, "output path (- for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*tiles) return cmd_tiles(o);
    if (*nielsen) return cmd_nielsen(o);
    if (*domain) return cmd_domain(o, da);
    if (*ver) return cmd_verify(o);
    if (*farey) return cmd_farey(farey_depth, o.out);
  } catch (const TamenessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  } catch (const ConfigError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kInvalid;
}
