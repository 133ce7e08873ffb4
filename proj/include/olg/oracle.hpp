#pragma once

#include "olg/feasible.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace olg {

/// One probability distribution over action profiles per overlap.
struct PrdLottery {
  // per overlap: (flat profile index -> probability), probabilities sum to 1
  std::vector<std::map<int, Rat>> per_overlap;
};

namespace oracle {

// The oracle recomputes lifetime payoffs from the per-period definition and
// shares only the geometry layer with the main path, so equivalence checks
// compare genuinely independent routes.
inline PayoffVector lifetime_payoff_direct(const StageGame& g, const LifetimeSequence& seq,
                                           const DiscountSpec& spec) {
  const int n = g.num_players;
  const int len = n * spec.T;
  if (static_cast<int>(seq.size()) != len)
    throw ValidationError("lifetime sequence length must equal n*T");
  std::vector<Rat> pw(len);
  Rat denom = 0;
  {
    Rat p = 1;
    for (int t = 0; t < len; ++t, p *= spec.delta) {
      pw[t] = p;
      denom += p;
    }
  }
  PayoffVector u(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < len; ++t) {
      int period = (i * spec.T + t) % len;  // birth at period (i-1)T+1, cyclic
      u[i] += pw[t] * g.payoffs[g.profile_index(seq[period])][i];
    }
    u[i] /= denom;
  }
  return u;
}

}  // namespace oracle

/// Hull of U(a^[nT]) over the full A^{nT} enumeration.
inline Polytope enumerate_lifetime_hull(const StageGame& g, const DiscountSpec& spec,
                                        long cap = enumeration_cap()) {
  std::vector<Point> pts;
  std::map<Point, bool> seen;
  detail::for_each_sequence(g, g.num_players * spec.T, cap, [&](const LifetimeSequence& seq) {
    Point u = oracle::lifetime_payoff_direct(g, seq, spec);
    if (seen.emplace(u, true).second) pts.push_back(std::move(u));
  });
  return Polytope::from_points(g.num_players, pts);
}

/// The brute-force hull and the stable-sequence hull must always coincide.
inline bool theorem1_equivalence(const StageGame& g, const DiscountSpec& spec,
                                 long cap = enumeration_cap()) {
  return hull_equal(enumerate_lifetime_hull(g, spec, cap),
                    feasible_set(g, spec.Delta, cap));
}

/// Per-overlap lottery mimicking within-overlap discounting: a profile's
/// probability is its normalized discount weight over the overlap's periods.
inline PrdLottery prd_lottery(const StageGame& g, const LifetimeSequence& seq,
                              const DiscountSpec& spec) {
  const int n = g.num_players;
  const int T = spec.T;
  if (static_cast<int>(seq.size()) != n * T)
    throw ValidationError("lifetime sequence length must equal n*T");
  Rat overlap_denom = 0;
  for (int t = 0; t < T; ++t) overlap_denom += rat_pow(spec.delta, t);
  PrdLottery lot;
  lot.per_overlap.resize(n);
  for (int k = 0; k < n; ++k) {
    for (int t = 0; t < T; ++t) {
      int idx = g.profile_index(seq[k * T + t]);
      lot.per_overlap[k][idx] += rat_pow(spec.delta, t) / overlap_denom;
    }
  }
  return lot;
}

/// Expected stable payoff of the lottery: sum over overlap draws of
/// prod_k alpha^k(a^k) * v(a^[n]); equals the generating sequence's payoff.
inline PayoffVector prd_expected_payoff(const StageGame& g, const PrdLottery& lot,
                                        const DiscountSpec& spec) {
  const int n = g.num_players;
  if (static_cast<int>(lot.per_overlap.size()) != n)
    throw ValidationError("lottery must have one distribution per overlap");
  for (const auto& dist : lot.per_overlap) {
    Rat total = 0;
    for (const auto& [idx, p] : dist) {
      if (p < 0) throw ValidationError("negative lottery probability");
      total += p;
    }
    if (total != 1) throw ValidationError("lottery distribution must sum to 1");
  }
  PayoffVector expected(n, Rat(0));
  std::vector<std::map<int, Rat>::const_iterator> its(n);
  for (int k = 0; k < n; ++k) its[k] = lot.per_overlap[k].begin();
  while (true) {
    Rat weight = 1;
    StableSequence s(n);
    for (int k = 0; k < n; ++k) {
      weight *= its[k]->second;
      s[k] = g.profile_from_index(its[k]->first);
    }
    PayoffVector v = stable_payoff(g, s, spec.Delta);
    for (int i = 0; i < n; ++i) expected[i] += weight * v[i];
    int pos = n - 1;
    while (pos >= 0 && std::next(its[pos]) == lot.per_overlap[pos].end()) {
      its[pos] = lot.per_overlap[pos].begin();
      --pos;
    }
    if (pos < 0) break;
    ++its[pos];
  }
  return expected;
}

struct SimulationResult {
  PayoffVector mean;                // exact rational sample mean
  std::vector<double> std_error;    // per-coordinate standard error of the mean
};

/// Seeded Monte Carlo playout of the lottery; deterministic given the seed.
/// Realized payoffs accumulate in exact rationals, only the spread is a float.
inline SimulationResult prd_simulate(const StageGame& g, const PrdLottery& lot,
                                     const DiscountSpec& spec, std::uint64_t seed, long trials) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  const int n = g.num_players;
  const int len = n * spec.T;
  std::vector<Rat> pw(len);
  Rat denom = 0;
  {
    Rat p = 1;
    for (int t = 0; t < len; ++t, p *= spec.delta) {
      pw[t] = p;
      denom += p;
    }
  }
  // player i, lifecycle position k -> total discount weight on overlap (i+k) mod n
  std::vector<std::vector<Rat>> coeff(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < len; ++t) coeff[i][t / spec.T] += pw[t] / denom;

  SplitMix64 rng(seed);
  std::vector<Rat> sum(n, Rat(0));
  std::vector<double> sum_sq(n, 0.0);
  std::vector<int> drawn(n);
  for (long trial = 0; trial < trials; ++trial) {
    for (int k = 0; k < n; ++k) {
      Rat r = rng.unit_rational();
      Rat cum = 0;
      int chosen = lot.per_overlap[k].rbegin()->first;
      for (const auto& [idx, p] : lot.per_overlap[k]) {
        cum += p;
        if (r < cum) {
          chosen = idx;
          break;
        }
      }
      drawn[k] = chosen;
    }
    for (int i = 0; i < n; ++i) {
      Rat realized = 0;
      for (int k = 0; k < n; ++k)
        realized += coeff[i][k] * g.payoffs[drawn[(i + k) % n]][i];
      sum[i] += realized;
      double x = rat_to_double(realized);
      sum_sq[i] += x * x;
    }
  }
  SimulationResult result;
  result.mean.resize(n);
  result.std_error.resize(n);
  for (int i = 0; i < n; ++i) {
    result.mean[i] = sum[i] / trials;
    double m = rat_to_double(result.mean[i]);
    double var = sum_sq[i] / trials - m * m;
    if (var < 0) var = 0;
    result.std_error[i] = std::sqrt(var / trials);
  }
  return result;
}

struct NonperiodicReport {
  Rat delta, delta_prime;
  Rat target;      // first-generation payoff of player 2 under delta: delta/(1+delta)
  Rat achievable;  // best attainable under delta' given player 1 keeps payoff 1
  bool infeasible; // achievable < target, so the delta-feasible sequence fails under delta'
};

/// Non-periodic payoff stream (1,0),(1,0),(0,1),(0,1),...: the first
/// generation's payoffs are not reproducible under a smaller discount factor.
inline NonperiodicReport nonperiodic_counterexample(const Rat& delta, const Rat& delta_prime) {
  if (!(delta_prime > 0 && delta_prime < delta && delta < 1))
    throw ValidationError("need 0 < delta' < delta < 1");
  NonperiodicReport report;
  report.delta = delta;
  report.delta_prime = delta_prime;
  report.target = delta / (1 + delta);
  report.achievable = delta_prime / (1 + delta_prime);
  report.infeasible = report.achievable < report.target;
  return report;
}

/// Seeded random lifetime sequence; documented generator for reproducibility.
inline LifetimeSequence random_lifetime_sequence(const StageGame& g, const DiscountSpec& spec,
                                                SplitMix64& rng) {
  LifetimeSequence seq;
  const int len = g.num_players * spec.T;
  for (int t = 0; t < len; ++t)
    seq.push_back(g.profile_from_index(
        static_cast<int>(rng.below(static_cast<std::uint64_t>(g.profile_count())))));
  return seq;
}

}  // namespace olg
