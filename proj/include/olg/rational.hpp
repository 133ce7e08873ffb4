#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace olg {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Base-10 conversion of an optionally signed digit string; cpp_int's own
/// string constructor would treat a leading zero as an octal prefix.
inline BigInt bigint_from_decimal(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  BigInt v = 0;
  for (; i < s.size(); ++i) v = v * 10 + (s[i] - '0');
  return (!s.empty() && s[0] == '-') ? BigInt(-v) : v;
}

}  // namespace detail

/// Parses "p/q", integer, or plain decimal literals ("0.25" -> 1/4) exactly.
inline Rat parse_rational(const std::string& text) {
  auto fail = [&]() -> Rat {
    throw ParseError("invalid rational literal: '" + text + "'");
  };
  std::size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  std::string s = text.substr(begin, end - begin);
  if (s.empty()) return fail();

  auto is_int = [](const std::string& t) {
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) return fail();
    BigInt q = detail::bigint_from_decimal(den);
    if (q == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rat(detail::bigint_from_decimal(num), q);
  }

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) head = head.substr(1);
    if (head.empty() && tail.empty()) return fail();
    for (char c : head + tail)
      if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    BigInt mantissa = detail::bigint_from_decimal(head + tail);
    BigInt scale = 1;
    for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
    Rat r(mantissa, scale);
    return neg ? -r : r;
  }

  if (!is_int(s)) return fail();
  return Rat(detail::bigint_from_decimal(s));
}

/// Serializes as "p/q" with q > 0 in lowest terms, or "p" when q == 1.
inline std::string rat_to_string(const Rat& r) {
  std::string num = numerator(r).str();
  if (denominator(r) == 1) return num;
  return num + "/" + denominator(r).str();
}

inline Rat rat_pow(const Rat& base, long exp) {
  if (exp < 0) {
    if (base == 0) throw std::domain_error("zero to negative power");
    return 1 / rat_pow(base, -exp);
  }
  Rat acc = 1, b = base;
  while (exp > 0) {
    if (exp & 1) acc *= b;
    b *= b;
    exp >>= 1;
  }
  return acc;
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

/// Exact dyadic conversion; every finite double is a rational.
inline Rat rat_from_double(double x) { return Rat(x); }

inline int rat_sign(const Rat& r) { return r < 0 ? -1 : (r > 0 ? 1 : 0); }

// splitmix64; fixed constants so seeded test data is reproducible anywhere.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, bound)
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
  // exact uniform rational in [0,1) with 64 bits of resolution
  Rat unit_rational() {
    return Rat(BigInt(next()), BigInt(1) << 64);
  }
};

}  // namespace olg
