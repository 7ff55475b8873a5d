// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <margulis/verify.hpp>

using namespace margulis;
using verify::Check;

namespace {

int failures = 0;

void report(int id, const std::string& title, const std::vector<Check>& checks) {
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.pass;
  if (!ok) ++failures;
  std::printf("[%s] %2d %s\n", ok ? "PASS" : "FAIL", id, title.c_str());
  for (const auto& c : checks) std::printf("       %s\n", verify::format(c).c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const CounterRng root(20240611);
  const verify::Tolerances tol;
  const auto modular = verify::Fixture::make(3, 3, 3);
  const auto square = verify::Fixture::make(4, 4, 4);

  report(1, "kernel identities",
         {verify::cross_product_identity(root.split(1), 10000, tol.identity),
          verify::involutions(root.split(2), 2000, tol.identity)});

  report(2, "ideal triangle Gram matrix", {verify::ideal_triangle_gram(root.split(3), 50, tol.gram)});

  report(3, "crooked ideal triangle round trip", {verify::cit_round_trip(root.split(4), 500, tol.identity)});

  auto disjoint = verify::cit_disjointness(modular, root.split(5), 200);
  disjoint.push_back(verify::edge_case_faces_meet(modular));
  report(4, "crooked halfspace disjointness", disjoint);

  report(5, "Margulis invariant agreement",
         {verify::alpha_agreement(modular, root.split(6), 500, tol.alpha),
          verify::alpha_powers(modular, root.split(7), 100, tol.identity)});

  report(6, "corner matrices rank one", verify::rank_one(modular, 4, tol.rank_one, tol.zero_row));

  auto tiling = verify::tiling(modular, 6, 4);
  report(7, "tiling combinatorics", tiling.checks);

  report(8, "flip covector identity",
         {verify::flip_identity(modular, 2, tol.flip), verify::flip_identity(square, 2, tol.flip)});

  report(9, "fundamental domain sampling and opposite sign",
         {verify::domain_sampling(modular, tiling.deepest, root.split(9), 5, 4, 10000, 4.0),
          verify::opposite_sign(tiling.deepest)});

  report(10, "edge quadrilaterals", {verify::edge_quadrilaterals(modular, root.split(10), 100, tol.alpha)});

  report(11, "Farey tree", {verify::farey_tree(10)});

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 11 criteria failed (%.1f s)\n", failures, secs);
  return failures ? 1 : 0;
}
