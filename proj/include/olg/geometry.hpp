#pragma once

#include "olg/rational.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace olg {

using Point = std::vector<Rat>;

/// Nonzero weight vector λ used for support-function queries.
struct Direction {
  std::vector<Rat> weights;

  explicit Direction(std::vector<Rat> w) : weights(std::move(w)) {
    bool nonzero = false;
    for (const Rat& x : weights) nonzero = nonzero || x != 0;
    if (weights.empty() || !nonzero)
      throw ValidationError("direction must have a nonzero coordinate");
  }

  std::size_t dim() const { return weights.size(); }
  const Rat& operator[](std::size_t i) const { return weights[i]; }
  bool operator==(const Direction& other) const { return weights == other.weights; }
};

inline Rat dot(const Direction& d, const Point& p) {
  if (d.dim() != p.size()) throw ValidationError("dimension mismatch in dot product");
  Rat s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += d[i] * p[i];
  return s;
}

namespace detail {

// Phase-1 simplex with Bland's rule over exact rationals.
// Decides whether {x >= 0 : A x = b} is nonempty. Rows of A must have equal length.
inline bool simplex_feasible(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const std::size_t m = a.size();
  if (m == 0) return true;
  const std::size_t n = a[0].size();
  for (std::size_t r = 0; r < m; ++r) {
    if (b[r] < 0) {
      for (Rat& x : a[r]) x = -x;
      b[r] = -b[r];
    }
  }
  // columns: n structural, m artificial, then RHS
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<Rat>> t(m, std::vector<Rat>(cols));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) t[r][j] = a[r][j];
    t[r][n + r] = 1;
    t[r][cols - 1] = b[r];
    basis[r] = n + r;
  }
  // reduced-cost row for min(sum of artificials); artificials start basic
  std::vector<Rat> cost(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    Rat s = 0;
    for (std::size_t r = 0; r < m; ++r) s += t[r][j];
    cost[j] = -s;
  }
  for (std::size_t r = 0; r < m; ++r) cost[n + r] = 0;

  while (true) {
    std::size_t enter = cols;  // Bland: smallest improving index
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    for (std::size_t r = 0; r < m; ++r) {
      if (t[r][enter] <= 0) continue;
      if (leave == m) {
        leave = r;
        continue;
      }
      Rat lhs = t[r][cols - 1] * t[leave][enter];
      Rat rhs = t[leave][cols - 1] * t[r][enter];
      if (lhs < rhs || (lhs == rhs && basis[r] < basis[leave])) leave = r;
    }
    if (leave == m) break;  // unbounded direction; objective stays positive
    // pivot on (leave, enter)
    Rat piv = t[leave][enter];
    for (Rat& x : t[leave]) x /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave || t[r][enter] == 0) continue;
      Rat f = t[r][enter];
      for (std::size_t j = 0; j < cols; ++j) t[r][j] -= f * t[leave][j];
    }
    if (cost[enter] != 0) {
      Rat f = cost[enter];
      for (std::size_t j = 0; j < cols; ++j) cost[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return cost[cols - 1] == 0;  // objective value is -cost[rhs]
}

inline int orient2d(const Point& o, const Point& a, const Point& b) {
  Rat cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  return rat_sign(cross);
}

// Andrew monotone chain, strict turns only; handles collinear and tiny inputs.
inline std::vector<Point> monotone_chain(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t k = pts.size();
  if (k <= 2) return pts;
  std::vector<Point> hull(2 * k);
  std::size_t h = 0;
  for (std::size_t i = 0; i < k; ++i) {
    while (h >= 2 && orient2d(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  for (std::size_t i = k - 1, lower = h + 1; i-- > 0;) {
    while (h >= lower && orient2d(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  hull.resize(h - 1);
  return hull;
}

}  // namespace detail

/// True iff p lies in the convex hull of pts; exact phase-1 simplex decision.
inline bool hull_membership(const Point& p, const std::vector<Point>& pts) {
  if (pts.empty()) throw ValidationError("hull_membership: empty point set");
  const std::size_t d = p.size();
  for (const Point& q : pts)
    if (q.size() != d) throw ValidationError("hull_membership: dimension mismatch");
  // weights w >= 0 with sum(w) = 1 and sum(w_j * pts_j) = p
  std::vector<std::vector<Rat>> a(d + 1, std::vector<Rat>(pts.size()));
  std::vector<Rat> b(d + 1);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t j = 0; j < pts.size(); ++j) a[r][j] = pts[j][r];
    b[r] = p[r];
  }
  for (std::size_t j = 0; j < pts.size(); ++j) a[d][j] = 1;
  b[d] = 1;
  return detail::simplex_feasible(std::move(a), std::move(b));
}

/// Points of pts that are not convex combinations of the others.
inline std::vector<Point> extreme_points(std::vector<Point> pts) {
  if (pts.empty()) throw ValidationError("extreme_points: empty point set");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return pts;
  std::vector<Point> result;
  std::vector<Point> others;
  others.reserve(pts.size() - 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    others.clear();
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) others.push_back(pts[j]);
    if (!hull_membership(pts[i], others)) result.push_back(pts[i]);
  }
  return result;
}

/// Extreme points in CCW order starting from the lexicographically smallest vertex.
inline std::vector<Point> ordered_hull_2d(const std::vector<Point>& pts) {
  for (const Point& p : pts)
    if (p.size() != 2) throw ValidationError("ordered_hull_2d: dimension must be 2");
  if (pts.empty()) throw ValidationError("ordered_hull_2d: empty point set");
  return detail::monotone_chain(pts);
}

/// V-representation polytope; canonical form keeps extreme points only.
struct Polytope {
  std::size_t dimension = 0;
  std::vector<Point> vertices;

  Polytope() = default;

  static Polytope from_points(std::size_t dim, const std::vector<Point>& pts) {
    if (pts.empty()) throw ValidationError("polytope needs at least one point");
    for (const Point& p : pts)
      if (p.size() != dim) throw ValidationError("polytope: dimension mismatch");
    Polytope poly;
    poly.dimension = dim;
    if (dim == 2) {
      // dedicated 2D hull; LP-based extraction stays O(k^2) and is kept for tests
      poly.vertices = detail::monotone_chain(pts);
      std::sort(poly.vertices.begin(), poly.vertices.end());
    } else {
      poly.vertices = extreme_points(pts);
    }
    return poly;
  }

  bool contains_point(const Point& p) const { return hull_membership(p, vertices); }
};

inline bool hull_contains(const Polytope& outer, const Polytope& inner) {
  if (outer.dimension != inner.dimension)
    throw ValidationError("hull_contains: dimension mismatch");
  for (const Point& v : inner.vertices)
    if (!hull_membership(v, outer.vertices)) return false;
  return true;
}

inline bool hull_equal(const Polytope& pa, const Polytope& pb) {
  return hull_contains(pa, pb) && hull_contains(pb, pa);
}

struct StrictInclusion {
  bool strict = false;
  std::optional<Point> witness;  // vertex of outer outside inner, when strict
};

inline StrictInclusion hull_strictly_contains(const Polytope& outer, const Polytope& inner) {
  if (outer.dimension != inner.dimension)
    throw ValidationError("hull_strictly_contains: dimension mismatch");
  StrictInclusion result;
  if (!hull_contains(outer, inner)) return result;
  for (const Point& v : outer.vertices) {
    if (!hull_membership(v, inner.vertices)) {
      result.strict = true;
      result.witness = v;
      return result;
    }
  }
  return result;
}

inline Rat support_value(const Polytope& p, const Direction& lambda) {
  if (p.vertices.empty()) throw ValidationError("support_value: empty polytope");
  Rat best = dot(lambda, p.vertices.front());
  for (std::size_t i = 1; i < p.vertices.size(); ++i)
    best = std::max(best, dot(lambda, p.vertices[i]));
  return best;
}

inline std::vector<Point> support_argmax(const Polytope& p, const Direction& lambda) {
  Rat best = support_value(p, lambda);
  std::vector<Point> arg;
  for (const Point& v : p.vertices)
    if (dot(lambda, v) == best) arg.push_back(v);
  return arg;
}

}  // namespace olg
