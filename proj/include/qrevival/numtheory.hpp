#pragma once

// Exact integer and rational primitives shared by every other module.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qrevival {

using BigInt = boost::multiprecision::cpp_int;
// Always reduced with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when a set of quantum numbers cannot revive together.
class NotCoRevivable : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct SqfDecomp {
  BigInt D;
  BigInt s;

  friend bool operator==(const SqfDecomp&, const SqfDecomp&) = default;
};

/// value = D s^2 / (D_star s_star^2), numerator and denominator parts coprime.
struct RationalSqfDecomp {
  BigInt D;
  BigInt s;
  BigInt D_star{1};
  BigInt s_star{1};

  friend bool operator==(const RationalSqfDecomp&, const RationalSqfDecomp&) = default;
};

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline BigInt isqrt(const BigInt& m) {
  if (m < 0) throw std::invalid_argument("isqrt: negative argument");
  return boost::multiprecision::sqrt(m);
}

inline std::optional<BigInt> is_perfect_square(const BigInt& m) {
  if (m < 0) return std::nullopt;
  BigInt r = boost::multiprecision::sqrt(m);
  if (r * r == m) return r;
  return std::nullopt;
}

inline std::optional<std::uint64_t> is_perfect_square(std::uint64_t m) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(m)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > m) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= m) ++r;
  if (static_cast<unsigned __int128>(r) * r == m) return r;
  return std::nullopt;
}

/// Unique m = D s^2 with D squarefree.
///
/// Primes are trial-divided while p^3 <= remainder. What is left then has at
/// most two prime factors, all larger than p, so it is either a prime square
/// or already squarefree.
inline SqfDecomp squarefree_decompose(const BigInt& m) {
  if (m <= 0) throw std::invalid_argument("squarefree_decompose: input must be positive");
  BigInt rem = m;
  BigInt D = 1;
  BigInt s = 1;
  for (BigInt p = 2; p * p * p <= rem; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (rem % p == 0) {
      rem /= p;
      ++e;
    }
    for (int i = 0; i + 1 < e; i += 2) s *= p;
    if (e % 2 == 1) D *= p;
  }
  if (rem > 1) {
    if (auto r = is_perfect_square(rem)) {
      s *= *r;
    } else {
      D *= rem;
    }
  }
  return {D, s};
}

inline RationalSqfDecomp rational_squarefree_decompose(const Rational& v) {
  if (v <= 0) throw std::invalid_argument("rational_squarefree_decompose: input must be positive");
  const SqfDecomp top = squarefree_decompose(numerator_of(v));
  const SqfDecomp bottom = squarefree_decompose(denominator_of(v));
  return {top.D, top.s, bottom.D, bottom.s};
}

inline bool is_squarefree(const BigInt& m) { return m >= 1 && squarefree_decompose(m).s == 1; }

/// Unordered pairs 0 <= a <= b with a^2 + b^2 = n, sorted by a.
inline std::vector<std::pair<BigInt, BigInt>> two_squares_representations(const BigInt& n) {
  if (n < 1) throw std::invalid_argument("two_squares_representations: n must be positive");
  std::vector<std::pair<BigInt, BigInt>> out;
  for (BigInt a = 0; 2 * a * a <= n; ++a) {
    if (auto b = is_perfect_square(n - a * a)) out.emplace_back(a, *b);
  }
  return out;
}

/// All ordered signed (x, y) with x^2 + y^2 = n, lexicographically sorted.
inline std::vector<std::pair<BigInt, BigInt>> signed_two_squares(const BigInt& n) {
  std::vector<std::pair<BigInt, BigInt>> out;
  for (const auto& [a, b] : two_squares_representations(n)) {
    for (int sa : {1, -1}) {
      for (int sb : {1, -1}) {
        out.emplace_back(sa * a, sb * b);
        out.emplace_back(sb * b, sa * a);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline BigInt lcm_of_denominators(std::span<const Rational> ratios) {
  if (ratios.empty()) throw std::invalid_argument("lcm_of_denominators: empty list");
  BigInt L = 1;
  for (const auto& r : ratios) L = boost::multiprecision::lcm(L, denominator_of(r));
  return L;
}

/// Positive divisors of n in increasing order (trial division, n small).
inline std::vector<BigInt> divisors(const BigInt& n) {
  if (n < 1) throw std::invalid_argument("divisors: n must be positive");
  std::vector<BigInt> low;
  std::vector<BigInt> high;
  for (BigInt d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      low.push_back(d);
      if (d * d != n) high.push_back(n / d);
    }
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

inline std::vector<BigInt> prime_factors(BigInt n) {
  std::vector<BigInt> out;
  for (BigInt p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// ---- text conversions; exact values cross every boundary as decimal strings

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& r) {
  if (denominator_of(r) == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline BigInt parse_bigint(std::string_view text) {
  std::string_view t = text;
  if (!t.empty() && (t.front() == '+' || t.front() == '-')) t.remove_prefix(1);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  if (text.front() == '+') text.remove_prefix(1);
  return BigInt(std::string(text));
}

/// Accepts "p" or "p/r" with integer p, r; decimals are rejected.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  const BigInt num = parse_bigint(text.substr(0, slash));
  const BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  return Rational(num, den);
}

/// Narrowing with a range check; used where numerics need machine integers.
inline std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::out_of_range("integer does not fit in 64 bits: " + v.str());
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace qrevival
