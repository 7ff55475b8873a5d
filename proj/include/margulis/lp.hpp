#pragma once
// Feasibility of a handful of linear inequalities in R^3 by vertex enumeration
// inside a bounding box. Inputs are tiny (at most a dozen rows), so the
// exhaustive search is both exact up to round-off and fast.

#include <cmath>
#include <optional>
#include <vector>

#include "lorentz.hpp"

namespace margulis::lp {

// g . x >= rhs
struct Inequality {
  Vec3<double> g;
  double rhs = 0;
};

inline std::optional<Vec3<double>> solve3(const Vec3<double>& r0, const Vec3<double>& r1,
                                          const Vec3<double>& r2, const Vec3<double>& b) {
  Mat3<double> m;
  for (int j = 0; j < 3; ++j) {
    m(0, j) = r0[j];
    m(1, j) = r1[j];
    m(2, j) = r2[j];
  }
  const double d = m.det();
  const double scale = euclid_norm(r0) * euclid_norm(r1) * euclid_norm(r2);
  if (std::abs(d) <= 1e-12 * scale) return std::nullopt;
  return m.inverse() * b;
}

// Returns a point satisfying every inequality within `check_tol`, restricted to
// the box |x_i - center_i| <= box, or nothing when none exists.
inline std::optional<Vec3<double>> find_feasible_point(std::vector<Inequality> rows,
                                                       const Vec3<double>& center, double box,
                                                       double check_tol) {
  for (int i = 0; i < 3; ++i) {
    Vec3<double> e{};
    e[i] = 1;
    rows.push_back({e, center[i] - box});
    rows.push_back({-e, -(center[i] + box)});
  }
  const int n = static_cast<int>(rows.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        auto x = solve3(rows[i].g, rows[j].g, rows[k].g, {rows[i].rhs, rows[j].rhs, rows[k].rhs});
        if (!x) continue;
        bool ok = true;
        for (const auto& r : rows) {
          const double lhs = r.g.x * x->x + r.g.y * x->y + r.g.z * x->z;
          if (lhs < r.rhs - check_tol * (1.0 + euclid_norm(r.g) * euclid_norm(*x))) {
            ok = false;
            break;
          }
        }
        if (ok) return x;
      }
  return std::nullopt;
}

}  // namespace margulis::lp
