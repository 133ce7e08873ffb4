#pragma once

#include "olg/feasible.hpp"
#include "olg/polynomial.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace olg {

/// One inequality of the optimality system: margin = LHS - RHS of constraint m.
struct Lemma1Verdict {
  int m = 0;
  Rat margin;
  bool holds = false;
};

/// Checks, for m = 1..n-1, that the age-weighted payoffs front-load:
/// sum_{k<=m} Delta^{k-1} w_k >= sum_{k<=m} Delta^{k-1} w_{n-m+k}.
inline std::vector<Lemma1Verdict> lemma1_check(const std::vector<PayoffVector>& u_seq,
                                               const Rat& Delta, const Direction& lambda) {
  check_effective_discount(Delta);
  const int n = static_cast<int>(lambda.dim());
  std::vector<Rat> w = age_weights(u_seq, lambda);
  std::vector<Lemma1Verdict> verdicts;
  for (int m = 1; m <= n - 1; ++m) {
    Rat margin = 0;
    for (int k = 1; k <= m; ++k)
      margin += rat_pow(Delta, k - 1) * (w[k - 1] - w[n - m + k - 1]);
    verdicts.push_back({m, margin, margin >= 0});
  }
  return verdicts;
}

/// Closed-form numerator of d/dDelta of the weighted welfare:
/// eta(Delta) = sum_k (sum_m (k-m) Delta^{k+m-3}) w_k.
inline Rat derivative_numerator(const std::vector<Rat>& w, const Rat& Delta) {
  if (!(Delta > 0 && Delta < 1))
    throw ValidationError("derivative requires Delta in (0,1)");
  const int n = static_cast<int>(w.size());
  Rat eta = 0;
  for (int k = 1; k <= n; ++k) {
    Rat coeff = 0;
    for (int m = 1; m <= n; ++m) {
      if (m == k) continue;  // k+m-3 can be -1 only here, with factor zero anyway
      coeff += Rat(k - m) * rat_pow(Delta, k + m - 3);
    }
    eta += coeff * w[k - 1];
  }
  return eta;
}

struct PmDecomposition {
  std::vector<Rat> p;  // p_1..p_{n-1}
  Rat reconstruction;  // sum_m p_m * (LHS of constraint m); equals eta identically
};

/// p_m = Delta^{n-2} + ... + Delta^{n-m-1}; the reconstruction recovers the
/// derivative numerator from the optimality constraints.
inline PmDecomposition pm_decomposition(const std::vector<Rat>& w, const Rat& Delta) {
  if (!(Delta > 0 && Delta < 1))
    throw ValidationError("decomposition requires Delta in (0,1)");
  const int n = static_cast<int>(w.size());
  PmDecomposition result;
  result.reconstruction = 0;
  for (int m = 1; m <= n - 1; ++m) {
    Rat pm = 0;
    for (int e = n - m - 1; e <= n - 2; ++e) pm += rat_pow(Delta, e);
    Rat lhs = 0;  // -sum_{k<=m} Delta^{k-1} w_k + sum_{k<=m} Delta^{k-1} w_{n-m+k}
    for (int k = 1; k <= m; ++k)
      lhs += rat_pow(Delta, k - 1) * (w[n - m + k - 1] - w[k - 1]);
    result.reconstruction += pm * lhs;
    result.p.push_back(pm);
  }
  return result;
}

/// Exact derivative of Delta -> W_lambda(s, Delta): eta / (sum_k Delta^{k-1})^2.
inline Rat welfare_derivative(const StageGame& g, const StableSequence& s, const Rat& Delta,
                              const Direction& lambda) {
  std::vector<Rat> w = age_weights(payoff_sequence(g, s), lambda);
  Rat denom = 0;
  for (int k = 0; k < g.num_players; ++k) denom += rat_pow(Delta, k);
  return derivative_numerator(w, Delta) / (denom * denom);
}

struct PairVerdict {
  Rat small_delta, large_delta;  // adjacent grid pair, small < large
  bool contains = false;         // F(large) subset of F(small)
  bool strict = false;
  std::optional<Point> witness;  // vertex of F(small) outside F(large)
};

struct MonotonicityReport {
  std::vector<Rat> deltas;
  std::vector<PairVerdict> verdicts;
};

inline MonotonicityReport monotonicity_sweep(const StageGame& g, const std::vector<Rat>& deltas,
                                             long cap = enumeration_cap()) {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    check_effective_discount(deltas[i]);
    if (i > 0 && !(deltas[i - 1] < deltas[i]))
      throw ValidationError("deltas must be strictly ascending");
  }
  MonotonicityReport report;
  report.deltas = deltas;
  if (deltas.size() < 2) return report;
  std::vector<Polytope> sets;
  for (const Rat& d : deltas) sets.push_back(feasible_set(g, d, cap));
  for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
    PairVerdict v;
    v.small_delta = deltas[i];
    v.large_delta = deltas[i + 1];
    v.contains = hull_contains(sets[i], sets[i + 1]);
    if (v.contains) {
      StrictInclusion s = hull_strictly_contains(sets[i], sets[i + 1]);
      v.strict = s.strict;
      v.witness = s.witness;
    }
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

struct StrictnessCertificate {
  bool strict = false;  // true iff V != F*
  // exposed edge of V whose endpoints differ in >= 2 coordinates
  std::optional<std::pair<Point, Point>> edge;
  // fallback: corner of F* outside V, when no edge certificate was found
  std::optional<Point> cube_witness;
};

namespace detail {

/// Is the segment [u, t] an exposed face of the hull of `vertices`? Decided by
/// the LP: exists lambda with lambda.(u-t) = 0 and lambda.(u-w) >= 1 for all
/// other vertices w (scale-invariance lets the strict gap be pinned at 1).
inline bool segment_is_exposed(const Point& u, const Point& t,
                               const std::vector<Point>& vertices) {
  const std::size_t n = u.size();
  std::vector<const Point*> others;
  for (const Point& w : vertices)
    if (w != u && w != t) others.push_back(&w);
  if (others.empty()) return true;  // two-vertex hull: any orthogonal lambda works (n >= 2)
  // variables: lambda+ (n), lambda- (n), slack per other vertex
  const std::size_t cols = 2 * n + others.size();
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  {
    std::vector<Rat> row(cols, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
      row[i] = u[i] - t[i];
      row[n + i] = -(u[i] - t[i]);
    }
    a.push_back(std::move(row));
    b.push_back(Rat(0));
  }
  for (std::size_t j = 0; j < others.size(); ++j) {
    std::vector<Rat> row(cols, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
      Rat d = u[i] - (*others[j])[i];
      row[i] = d;
      row[n + i] = -d;
    }
    row[2 * n + j] = -1;
    a.push_back(std::move(row));
    b.push_back(Rat(1));
  }
  return detail::simplex_feasible(std::move(a), std::move(b));
}

}  // namespace detail

/// Strict monotonicity holds iff V != F*. When strict, a
/// certificate edge (two exposed hull vertices differing in >= 2 coordinates)
/// is searched for; failing that, a cube corner outside V is reported.
inline StrictnessCertificate strictness_check(const StageGame& g) {
  StrictnessCertificate cert;
  Polytope v = one_shot_hull(g);
  Polytope cube = payoff_cube(g);
  cert.strict = !hull_equal(v, cube);
  if (!cert.strict) return cert;
  const std::size_t n = v.dimension;
  for (std::size_t i = 0; i < v.vertices.size() && !cert.edge; ++i) {
    for (std::size_t j = i + 1; j < v.vertices.size() && !cert.edge; ++j) {
      const Point& a = v.vertices[i];
      const Point& b = v.vertices[j];
      int differing = 0;
      for (std::size_t c = 0; c < n; ++c)
        if (a[c] != b[c]) ++differing;
      if (differing < 2) continue;
      if (detail::segment_is_exposed(a, b, v.vertices)) cert.edge = {a, b};
    }
  }
  if (!cert.edge) {
    for (const Point& corner : cube.vertices) {
      if (!hull_membership(corner, v.vertices)) {
        cert.cube_witness = corner;
        break;
      }
    }
  }
  return cert;
}

enum class LimitEnd { toward_zero, toward_one };

/// Limit sets: Delta -> 1 gives V, Delta -> 0 gives the payoff cube F*.
inline Polytope limit_set(const StageGame& g, LimitEnd end) {
  return end == LimitEnd::toward_one ? one_shot_hull(g) : payoff_cube(g);
}

/// Limit-optimal stable sequences for a fixed direction. Delta -> 1: every
/// overlap plays a stage-welfare maximizer. Delta -> 0: overlap k plays a
/// maximizer of lambda_k u_k (the youngest player's weighted payoff).
inline std::vector<StableSequence> limit_solution(const StageGame& g, const Direction& lambda,
                                                  LimitEnd end) {
  const int n = g.num_players;
  if (lambda.dim() != static_cast<std::size_t>(n))
    throw ValidationError("direction dimension must equal the player count");
  std::vector<std::vector<int>> per_overlap(n);
  if (end == LimitEnd::toward_one) {
    std::optional<Rat> best;
    std::vector<int> argmax;
    for (int p = 0; p < g.profile_count(); ++p) {
      Rat score = dot(lambda, g.payoffs[p]);
      if (!best || score > *best) {
        best = score;
        argmax = {p};
      } else if (score == *best) {
        argmax.push_back(p);
      }
    }
    for (int k = 0; k < n; ++k) per_overlap[k] = argmax;
  } else {
    for (int k = 0; k < n; ++k) {
      std::optional<Rat> best;
      for (int p = 0; p < g.profile_count(); ++p) {
        Rat score = lambda[k] * g.payoffs[p][k];
        if (!best || score > *best) {
          best = score;
          per_overlap[k] = {p};
        } else if (score == *best) {
          per_overlap[k].push_back(p);
        }
      }
    }
  }
  std::vector<StableSequence> result;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    StableSequence s;
    for (int k = 0; k < n; ++k) s.push_back(g.profile_from_index(per_overlap[k][idx[k]]));
    result.push_back(std::move(s));
    int pos = n - 1;
    while (pos >= 0 && idx[pos] + 1 == per_overlap[pos].size()) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  return result;
}

/// Deterministic direction family used by the set-level lemma checks: axis
/// directions +-e_i, all +-1 sign vectors, plus `extra` seeded random rational
/// directions with entries in [-9, 9].
inline std::vector<Direction> direction_family(int n, int extra = 8,
                                               std::uint64_t seed = 0x01d5eedULL) {
  std::vector<Direction> dirs;
  for (int i = 0; i < n; ++i) {
    for (int sign : {1, -1}) {
      std::vector<Rat> w(n, Rat(0));
      w[i] = sign;
      dirs.emplace_back(std::move(w));
    }
  }
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<Rat> w(n);
    for (int i = 0; i < n; ++i) w[i] = (mask >> i & 1) ? 1 : -1;
    dirs.emplace_back(std::move(w));
  }
  SplitMix64 rng(seed);
  while (extra > 0) {
    std::vector<Rat> w(n);
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      long v = static_cast<long>(rng.below(19)) - 9;
      w[i] = v;
      nonzero = nonzero || v != 0;
    }
    if (!nonzero) continue;
    dirs.emplace_back(std::move(w));
    --extra;
  }
  return dirs;
}

using PayoffSequence = std::vector<PayoffVector>;

struct BreakpointPiece {
  Rat lo, hi;  // the piece covers (lo, hi]; boundaries shared with neighbors
  std::vector<PayoffSequence> optimal;  // U*_lambda, constant on the piece
};

struct BreakpointLocation {
  bool exact = false;
  Rat value;    // when exact
  Rat lo, hi;   // isolating interval otherwise (lo == hi == value when exact)
  std::vector<PayoffSequence> optimal_at;  // tie set at the point, when exact
};

struct BreakpointReport {
  Direction direction;
  bool exact_mode = true;  // false when the numeric-grid fallback was used
  std::vector<BreakpointPiece> pieces;
  std::vector<BreakpointLocation> breakpoints;
};

namespace detail {

inline std::vector<PayoffSequence> optimal_payoff_sequences_at(
    const std::vector<std::pair<PayoffSequence, std::vector<Rat>>>& candidates, const Rat& Delta) {
  std::optional<Rat> best;
  std::vector<PayoffSequence> out;
  for (const auto& [useq, w] : candidates) {
    Rat num = 0;  // common positive denominator, so the numerator orders welfare
    for (std::size_t k = 0; k < w.size(); ++k) num += rat_pow(Delta, k) * w[k];
    if (!best || num > *best) {
      best = num;
      out = {useq};
    } else if (num == *best) {
      out.push_back(useq);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Partitions (0,1] into maximal intervals on which the set of optimal payoff
/// sequences for direction lambda is constant. Candidate cutoffs are the roots
/// of pairwise welfare-numerator differences: exact rationals for n = 2 or
/// when a rational root exists, otherwise Sturm-isolated intervals of width
/// 2^-40. Above max_n_exact a 1/256-resolution grid scan is used instead.
inline BreakpointReport breakpoints(const StageGame& g, const Direction& lambda,
                                    int max_n_exact = 5, long cap = enumeration_cap()) {
  const int n = g.num_players;
  if (lambda.dim() != static_cast<std::size_t>(n))
    throw ValidationError("direction dimension must equal the player count");
  BreakpointReport report{lambda, true, {}, {}};

  // distinct payoff sequences with their age-weight vectors
  std::vector<std::pair<PayoffSequence, std::vector<Rat>>> candidates;
  {
    std::set<PayoffSequence> seen;
    detail::for_each_sequence(g, n, cap, [&](const StableSequence& s) {
      PayoffSequence u = payoff_sequence(g, s);
      if (seen.insert(u).second) candidates.push_back({u, age_weights(u, lambda)});
    });
  }

  std::vector<IsolatedRoot> cutoffs;
  if (n > max_n_exact) {
    report.exact_mode = false;
    const int grid = 256;
    std::vector<PayoffSequence> prev;
    for (int k = 1; k <= grid; ++k) {
      Rat d(k, grid);
      auto opt = detail::optimal_payoff_sequences_at(candidates, d);
      if (k > 1 && opt != prev)
        cutoffs.push_back({false, Rat(0), Rat(k - 1, grid), d});
      prev = std::move(opt);
    }
  } else {
    const Rat width = Rat(1, BigInt(1) << 40);
    std::set<std::pair<Rat, Rat>> seen_intervals;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        Poly diff(n, Rat(0));
        for (int k = 0; k < n; ++k)
          diff[k] = candidates[i].second[k] - candidates[j].second[k];
        poly_trim(diff);
        if (diff.empty()) continue;
        for (const IsolatedRoot& r : isolate_roots(diff, Rat(0), Rat(1), width)) {
          if (seen_intervals.insert({r.lo, r.hi}).second) cutoffs.push_back(r);
        }
      }
    }
    std::sort(cutoffs.begin(), cutoffs.end(),
              [](const IsolatedRoot& a, const IsolatedRoot& b) { return a.lo < b.lo; });
  }

  // merge overlapping isolating intervals into clusters
  std::vector<IsolatedRoot> clusters;
  for (const IsolatedRoot& r : cutoffs) {
    if (!clusters.empty() && r.lo <= clusters.back().hi) {
      clusters.back().hi = std::max(clusters.back().hi, r.hi);
      clusters.back().exact = clusters.back().exact && r.exact &&
                              clusters.back().value == r.value;
    } else {
      clusters.push_back(r);
    }
  }

  // sample a point inside every open region between clusters
  std::vector<Rat> samples;
  if (clusters.empty()) {
    samples.push_back(Rat(1, 2));
  } else {
    samples.push_back(clusters.front().lo / 2);
    for (std::size_t i = 0; i + 1 < clusters.size(); ++i)
      samples.push_back((clusters[i].hi + clusters[i + 1].lo) / 2);
    samples.push_back((clusters.back().hi + 1) / 2);
  }
  std::vector<std::vector<PayoffSequence>> region_opt;
  for (const Rat& d : samples)
    region_opt.push_back(detail::optimal_payoff_sequences_at(candidates, d));

  // keep only the clusters across which the optimizer set actually changes
  Rat piece_lo = 0;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (region_opt[i] == region_opt[i + 1]) continue;
    BreakpointLocation loc;
    loc.exact = clusters[i].exact;
    loc.value = clusters[i].value;
    loc.lo = clusters[i].lo;
    loc.hi = clusters[i].hi;
    if (loc.exact)
      loc.optimal_at = detail::optimal_payoff_sequences_at(candidates, loc.value);
    Rat boundary = loc.exact ? loc.value : loc.lo;
    report.pieces.push_back({piece_lo, boundary, region_opt[i]});
    piece_lo = loc.exact ? loc.value : loc.hi;
    report.breakpoints.push_back(std::move(loc));
  }
  report.pieces.push_back({piece_lo, Rat(1), region_opt.back()});
  return report;
}

}  // namespace olg
