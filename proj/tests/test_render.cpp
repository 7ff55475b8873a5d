#include <gtest/gtest.h>

#include <margulis/render.hpp>
#include <margulis/verify.hpp>

#include <sstream>

using namespace margulis;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, ParsesKeysAndComments) {
  const auto c = parse("# header\n\ntraces = 3, 3.5, 4  # boundary\n  depth=2\nseed = 9\nfixed_point_choice = minus\n");
  EXPECT_EQ(c.x, 3);
  EXPECT_EQ(c.y, 3.5);
  EXPECT_EQ(c.z, 4);
  EXPECT_EQ(c.depth, 2);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.fixed_point_choice, FixedPointChoice::minus);
  EXPECT_EQ(c.samples, Config{}.samples);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(config_error("depth = 2\n\ndepth = 3\n"), "line 3: duplicate key 'depth'");
  EXPECT_EQ(config_error("# ok\ncolour = red\n"), "line 2: unknown key 'colour'");
  EXPECT_EQ(config_error("depth 2\n"), "line 1: expected key = value");
  EXPECT_NE(config_error("depth = -1\n").find("line 1:"), std::string::npos);
  EXPECT_NE(config_error("traces = 3, 3\n").find("line 1:"), std::string::npos);
  EXPECT_NE(config_error("tolerance = 0\n").find("line 1:"), std::string::npos);
  EXPECT_THROW(load_config("/nonexistent/margulis.cfg"), ConfigError);
}

TEST(ResultFile, Formatting) {
  ResultFile r;
  r.comment("note");
  r.set("a", 0.1);
  r.set("b", true);
  r.set("n", 7);
  r.set_array("v", {1, 2.5});
  EXPECT_EQ(r.str(), "# note\na = 0.1\nb = true\nn = 7\nv = [1, 2.5]\n");
}

TEST(Svg, ViewBoxFollowsAspect) {
  Svg s(-1, -1, 2, 1, 400);
  s.line({-1, -1}, {1, 0}, "#000", 1);
  const auto out = s.str();
  EXPECT_NE(out.find("viewBox=\"0 0 400.000 200.000\""), std::string::npos);
  // y is flipped: (-1, -1) lands at the bottom left
  EXPECT_NE(out.find("x1=\"0.000\" y1=\"200.000\" x2=\"400.000\" y2=\"0.000\""), std::string::npos);
}

TEST(Obj, RoundTrip) {
  Mesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1.25}};
  m.begin_group("stem");
  m.faces.push_back({0, 1, 2});
  m.begin_group("wing_plus");
  m.faces.push_back({0, 2, 3});
  const std::string text = to_obj(m, "two lines\nof header");
  EXPECT_EQ(text.rfind("# two lines\n# of header\n", 0), 0u);
  std::istringstream in(text);
  const Mesh back = parse_obj(in);
  EXPECT_EQ(back.faces, m.faces);
  EXPECT_EQ(back.groups, m.groups);
  ASSERT_EQ(back.vertices.size(), m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_EQ(back.vertices[i].z, m.vertices[i].z);
  EXPECT_EQ(to_obj(back, "two lines\nof header"), text);

  std::istringstream bad("v 0 0 0\nf 1 2 3\n");
  EXPECT_THROW(parse_obj(bad), std::runtime_error);
}

TEST(Obj, CrookedPlaneMesh) {
  const auto h = crooked_halfspace(Vec3<double>{1, 0, 0}, Point<double>{{0.5, 0, 0}});
  const Mesh m = mesh_crooked_plane(h, 3.0, 8);
  std::istringstream in(to_obj(m));
  const Mesh back = parse_obj(in);
  EXPECT_EQ(back.faces.size(), m.faces.size());
  ASSERT_EQ(back.groups.size(), 3u);
}

TEST(Figures, NielsenOrbitCount) {
  Config c;
  for (int len = 0; len <= 5; ++len) {
    c.words = len;
    const auto f = render_nielsen(c);
    EXPECT_EQ(f.triangles, 1 + 3 * ((std::size_t(1) << len) - 1));
    EXPECT_LE(f.max_radius, 1 + 1e-9);
  }
}

TEST(Figures, TilesAtDepthThree) {
  Config c;
  c.depth = 3;
  const auto f = render_tiles(c);
  EXPECT_TRUE(f.ok);
  const auto text = f.result.str();
  EXPECT_NE(text.find("boundary_edges = 24\n"), std::string::npos);
  EXPECT_NE(text.find("tiles = 22\n"), std::string::npos);
  EXPECT_NE(text.find("status = pass\n"), std::string::npos);
  EXPECT_NE(f.svg.find("<svg"), std::string::npos);
}

TEST(Figures, Deterministic) {
  Config c;
  c.depth = 2;
  c.words = 3;
  EXPECT_EQ(render_tiles(c).svg, render_tiles(c).svg);
  EXPECT_EQ(render_nielsen(c).svg, render_nielsen(c).svg);
}

TEST(Suites, VerdictsDoNotDependOnSeed) {
  verify::SuiteParams p;
  p.depth = 2;
  p.samples = 500;
  p.trials = 20;
  p.words = 3;
  p.deformations = 2;
  const auto a = verify::run_suites(p);
  p.seed = 12345;
  const auto b = verify::run_suites(p);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_TRUE(a[i].pass) << verify::format(a[i]);
    EXPECT_EQ(a[i].pass, b[i].pass);
  }
  p.seed = 1;
  const auto again = verify::run_suites(p);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].worst, again[i].worst);
}
