#pragma once

#include "olg/game.hpp"
#include "olg/geometry.hpp"

#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace olg {

inline constexpr long kDefaultEnumCap = 1000000;

/// Enumeration budget for sequence spaces; OLG_ENUM_CAP overrides the default.
inline long enumeration_cap() {
  if (const char* env = std::getenv("OLG_ENUM_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultEnumCap;
}

/// (delta, T) resolved to the effective discount Delta = delta^T.
struct DiscountSpec {
  Rat delta;
  int T = 1;
  Rat Delta;
};

inline DiscountSpec effective_discount(const Rat& delta, int T) {
  if (!(delta > 0 && delta <= 1))
    throw ValidationError("delta must lie in (0,1]");
  if (T < 1) throw ValidationError("T must be a positive integer");
  return DiscountSpec{delta, T, rat_pow(delta, T)};
}

using StableSequence = std::vector<ActionProfile>;    // length n, one profile per overlap
using LifetimeSequence = std::vector<ActionProfile>;  // length n*T

inline void check_effective_discount(const Rat& Delta) {
  if (!(Delta > 0 && Delta <= 1))
    throw ValidationError("effective discount must lie in (0,1]");
}

/// v(a^[n]): average lifetime payoff of the stable sequence under effective
/// discount Delta. Player i's summation starts at overlap i, cyclically.
inline PayoffVector stable_payoff(const StageGame& g, const StableSequence& s, const Rat& Delta) {
  check_effective_discount(Delta);
  const int n = g.num_players;
  if (static_cast<int>(s.size()) != n)
    throw ValidationError("stable sequence length must equal the player count");
  std::vector<Rat> pw(n);
  Rat denom = 0;
  for (int k = 0; k < n; ++k) {
    pw[k] = rat_pow(Delta, k);
    denom += pw[k];
  }
  PayoffVector v(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const ActionProfile& a = s[(i + k) % n];
      v[i] += pw[k] * g.payoff(a)[i];
    }
    v[i] /= denom;
  }
  return v;
}

/// U(a^[nT]): average lifetime payoff under per-period discounting by delta.
/// Player i's window starts at period (i-1)T+1, cyclically.
inline PayoffVector lifetime_payoff(const StageGame& g, const LifetimeSequence& seq,
                                    const DiscountSpec& spec) {
  const int n = g.num_players;
  const int len = n * spec.T;
  if (static_cast<int>(seq.size()) != len)
    throw ValidationError("lifetime sequence length must equal n*T");
  std::vector<Rat> pw(len);
  Rat denom = 0;
  for (int k = 0; k < len; ++k) {
    pw[k] = rat_pow(spec.delta, k);
    denom += pw[k];
  }
  PayoffVector u(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    const int start = i * spec.T;
    for (int k = 0; k < len; ++k)
      u[i] += pw[k] * g.payoff(seq[(start + k) % len])[i];
    u[i] /= denom;
  }
  return u;
}

namespace detail {

/// Calls fn with every length-`length` profile sequence in lexicographic order
/// (overlap 1 outermost, profiles ordered by flat index).
template <class Fn>
void for_each_sequence(const StageGame& g, int length, long cap, Fn&& fn) {
  const long base = g.profile_count();
  long total = 1;
  for (int k = 0; k < length; ++k) {
    if (total > cap / base + 1) total = cap + 1;  // saturate
    else total *= base;
    if (total > cap)
      throw CapExceededError("sequence enumeration exceeds the cap of " + std::to_string(cap));
  }
  std::vector<int> digits(length, 0);
  std::vector<ActionProfile> seq(length);
  for (int k = 0; k < length; ++k) seq[k] = g.profile_from_index(0);
  while (true) {
    fn(const_cast<const std::vector<ActionProfile>&>(seq));
    int pos = length - 1;
    while (pos >= 0 && digits[pos] == base - 1) {
      digits[pos] = 0;
      seq[pos] = g.profile_from_index(0);
      --pos;
    }
    if (pos < 0) break;
    ++digits[pos];
    seq[pos] = g.profile_from_index(digits[pos]);
  }
}

}  // namespace detail

/// F(Delta) = co{v(a^[n]) : a^[n] in A^n}, canonicalized to extreme points.
inline Polytope feasible_set(const StageGame& g, const Rat& Delta,
                             long cap = enumeration_cap()) {
  check_effective_discount(Delta);
  std::vector<Point> pts;
  detail::for_each_sequence(g, g.num_players, cap, [&](const StableSequence& s) {
    pts.push_back(stable_payoff(g, s, Delta));
  });
  return Polytope::from_points(g.num_players, pts);
}

/// Vertex of F(Delta) together with its lexicographically first generating
/// stable sequence.
struct GeneratedVertex {
  Point vertex;
  StableSequence generator;
};

inline std::vector<GeneratedVertex> feasible_set_with_generators(
    const StageGame& g, const Rat& Delta, long cap = enumeration_cap()) {
  check_effective_discount(Delta);
  std::map<Point, StableSequence> first_gen;
  std::vector<Point> pts;
  detail::for_each_sequence(g, g.num_players, cap, [&](const StableSequence& s) {
    Point v = stable_payoff(g, s, Delta);
    first_gen.emplace(v, s);  // keeps the lexicographically first sequence
    pts.push_back(std::move(v));
  });
  Polytope poly = Polytope::from_points(g.num_players, pts);
  std::vector<GeneratedVertex> out;
  for (const Point& v : poly.vertices) out.push_back({v, first_gen.at(v)});
  return out;
}

/// W_lambda(a^[n], Delta) = sum_i lambda_i v_i.
inline Rat welfare(const StageGame& g, const StableSequence& s, const Rat& Delta,
                   const Direction& lambda) {
  return dot(lambda, stable_payoff(g, s, Delta));
}

/// Maximal lambda-weighted welfare with all attaining sequences and the
/// deduplicated set of attaining payoff sequences.
struct WelfareRecord {
  Direction direction;
  Rat Delta;
  Rat value;
  std::vector<StableSequence> optimizers;                       // A*_lambda, lexicographic
  std::vector<std::vector<PayoffVector>> optimizer_payoff_seqs;  // U*_lambda, deduplicated
};

inline WelfareRecord max_welfare(const StageGame& g, const Rat& Delta, const Direction& lambda,
                                 long cap = enumeration_cap()) {
  check_effective_discount(Delta);
  if (lambda.dim() != static_cast<std::size_t>(g.num_players))
    throw ValidationError("direction dimension must equal the player count");
  std::optional<Rat> best;
  std::vector<StableSequence> optimizers;
  detail::for_each_sequence(g, g.num_players, cap, [&](const StableSequence& s) {
    Rat w = welfare(g, s, Delta, lambda);
    if (!best || w > *best) {
      best = w;
      optimizers.clear();
      optimizers.push_back(s);
    } else if (w == *best) {
      optimizers.push_back(s);
    }
  });
  std::vector<std::vector<PayoffVector>> useqs;
  for (const StableSequence& s : optimizers) {
    std::vector<PayoffVector> u;
    for (const ActionProfile& a : s) u.push_back(g.payoff(a));
    if (std::find(useqs.begin(), useqs.end(), u) == useqs.end()) useqs.push_back(std::move(u));
  }
  return WelfareRecord{lambda, Delta, *best, std::move(optimizers), std::move(useqs)};
}

/// Age weights w_k = sum_i lambda_i u_i^{i+k-1}, indices cyclic.
inline std::vector<Rat> age_weights(const std::vector<PayoffVector>& u_seq,
                                    const Direction& lambda) {
  const std::size_t n = lambda.dim();
  if (u_seq.size() != n)
    throw ValidationError("payoff sequence length must equal the direction dimension");
  for (const auto& u : u_seq)
    if (u.size() != n) throw ValidationError("payoff vector dimension mismatch");
  std::vector<Rat> w(n, Rat(0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) w[k] += lambda[i] * u_seq[(i + k) % n][i];
  return w;
}

inline std::vector<PayoffVector> payoff_sequence(const StageGame& g, const StableSequence& s) {
  std::vector<PayoffVector> u;
  for (const ActionProfile& a : s) u.push_back(g.payoff(a));
  return u;
}

}  // namespace olg
