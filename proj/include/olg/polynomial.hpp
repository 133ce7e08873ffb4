#pragma once

#include "olg/rational.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace olg {

// Dense univariate polynomials over the rationals, coefficients ascending.
using Poly = std::vector<Rat>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Rat poly_eval(const Poly& p, const Rat& x) {
  Rat acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

inline Poly poly_derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  poly_trim(d);
  return d;
}

inline Poly poly_scale(Poly p, const Rat& c) {
  for (Rat& x : p) x *= c;
  return p;
}

/// Remainder of a by b; b must be nonzero.
inline Poly poly_rem(Poly a, const Poly& b) {
  poly_trim(a);
  while (poly_degree(a) >= poly_degree(b) && !a.empty()) {
    Rat f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    poly_trim(a);
  }
  return a;
}

inline Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat lead = a.back();
    for (Rat& x : a) x /= lead;  // monic
  }
  return a;
}

/// Exact division a / b assuming zero remainder.
inline Poly poly_div_exact(Poly a, const Poly& b) {
  poly_trim(a);
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
  while (poly_degree(a) >= poly_degree(b) && !a.empty()) {
    Rat f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    poly_trim(a);
  }
  poly_trim(q);
  return q;
}

/// Squarefree part p / gcd(p, p').
inline Poly poly_squarefree(const Poly& p) {
  Poly g = poly_gcd(p, poly_derivative(p));
  if (poly_degree(g) < 1) return p;
  return poly_div_exact(p, g);
}

inline std::vector<Poly> sturm_chain(Poly p) {
  poly_trim(p);
  std::vector<Poly> chain;
  if (p.empty()) return chain;
  chain.push_back(p);
  Poly d = poly_derivative(p);
  poly_trim(d);
  if (!d.empty()) chain.push_back(d);
  while (chain.size() >= 2) {
    Poly r = poly_rem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (Rat& x : r) x = -x;
    chain.push_back(std::move(r));
  }
  return chain;
}

inline int sturm_sign_changes(const std::vector<Poly>& chain, const Rat& x) {
  int changes = 0, prev = 0;
  for (const Poly& p : chain) {
    int s = rat_sign(poly_eval(p, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

/// Number of distinct real roots in (lo, hi]; p should be squarefree.
inline int sturm_count(const std::vector<Poly>& chain, const Rat& lo, const Rat& hi) {
  return sturm_sign_changes(chain, lo) - sturm_sign_changes(chain, hi);
}

/// Tries all rational-root-theorem candidates of the primitive integer form of
/// p lying in (lo, hi). Divisor enumeration is skipped for huge coefficients.
inline std::optional<Rat> rational_root_in(const Poly& p, const Rat& lo, const Rat& hi) {
  Poly q = p;
  poly_trim(q);
  if (q.size() < 2) return std::nullopt;
  BigInt common_den = 1;
  for (const Rat& c : q) common_den = lcm(common_den, denominator(c));
  std::vector<BigInt> ic;
  for (const Rat& c : q) ic.push_back(numerator(Rat(c * common_den)));
  std::size_t low = 0;
  while (low < ic.size() && ic[low] == 0) ++low;  // factor out x^low; root 0 excluded
  BigInt a0 = abs(ic[low]), ad = abs(ic.back());
  const BigInt kDivisorCap = 1000000000;
  if (a0 > kDivisorCap || ad > kDivisorCap) return std::nullopt;
  auto divisors = [](BigInt v) {
    std::vector<BigInt> out;
    for (BigInt d = 1; d * d <= v; ++d) {
      if (v % d == 0) {
        out.push_back(d);
        out.push_back(v / d);
      }
    }
    return out;
  };
  for (const BigInt& num : divisors(a0)) {
    for (const BigInt& den : divisors(ad)) {
      for (int sign : {1, -1}) {
        Rat cand(sign > 0 ? num : -num, den);
        if (cand > lo && cand < hi && poly_eval(q, cand) == 0) return cand;
      }
    }
  }
  return std::nullopt;
}

/// A real root reported either exactly or by an isolating interval (lo, hi].
struct IsolatedRoot {
  bool exact = false;
  Rat value;  // meaningful when exact
  Rat lo, hi;
};

/// Isolates the distinct roots of p in the open interval (lo0, hi0), shrinking
/// inexact roots to intervals of width at most `width`.
inline std::vector<IsolatedRoot> isolate_roots(const Poly& p_in, const Rat& lo0, const Rat& hi0,
                                               const Rat& width) {
  Poly p = poly_squarefree(p_in);
  poly_trim(p);
  std::vector<IsolatedRoot> out;
  if (p.size() < 2) return out;
  // shave endpoint roots so the open interval is what the chain counts
  while (poly_eval(p, hi0) == 0) p = poly_div_exact(p, Poly{-hi0, Rat(1)});
  while (poly_eval(p, lo0) == 0) p = poly_div_exact(p, Poly{-lo0, Rat(1)});
  if (p.size() < 2) return out;
  auto chain = sturm_chain(p);

  struct Segment {
    Rat lo, hi;
    int count;
  };
  std::vector<Segment> stack{{lo0, hi0, sturm_count(chain, lo0, hi0)}};
  while (!stack.empty()) {
    Segment seg = stack.back();
    stack.pop_back();
    if (seg.count == 0) continue;
    if (seg.count == 1) {
      if (auto r = rational_root_in(p, seg.lo, seg.hi)) {
        out.push_back({true, *r, *r, *r});
        continue;
      }
      Rat lo = seg.lo, hi = seg.hi;
      while (hi - lo > width) {
        Rat mid = (lo + hi) / 2;
        if (poly_eval(p, mid) == 0) {
          out.push_back({true, mid, mid, mid});
          goto next_segment;
        }
        if (sturm_count(chain, lo, mid) == 1) hi = mid;
        else lo = mid;
      }
      out.push_back({false, Rat(0), lo, hi});
    next_segment:;
      continue;
    }
    Rat mid = (seg.lo + seg.hi) / 2;
    if (poly_eval(p, mid) == 0) {
      out.push_back({true, mid, mid, mid});
      // counts on (lo, mid] include the root at mid; remove it
      Poly reduced = poly_div_exact(p, Poly{-mid, Rat(1)});
      auto sub = isolate_roots(reduced, seg.lo, seg.hi, width);
      out.insert(out.end(), sub.begin(), sub.end());
      continue;
    }
    stack.push_back({seg.lo, mid, sturm_count(chain, seg.lo, mid)});
    stack.push_back({mid, seg.hi, sturm_count(chain, mid, seg.hi)});
  }
  std::sort(out.begin(), out.end(),
            [](const IsolatedRoot& a, const IsolatedRoot& b) { return a.lo < b.lo; });
  return out;
}

}  // namespace olg
