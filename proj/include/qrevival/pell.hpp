#pragma once

// Classic and generalized Pell equations, x^2 - D y^2 = 1 and x^2 - D y^2 = N
// with N < 0, and their partition into finitely many recurrence families.

#include <algorithm>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <stdexcept>
#include <vector>

#include "numtheory.hpp"

namespace qrevival {

struct Solution2 {
  BigInt x;
  BigInt y;

  friend bool operator==(const Solution2&, const Solution2&) = default;
  friend auto operator<=>(const Solution2& a, const Solution2& b) {
    if (a.x != b.x) return a.x < b.x ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.y != b.y) return a.y < b.y ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

/// Minimal positive solution of x^2 - D y^2 = 1.
struct PellUnit {
  BigInt x;
  BigInt y;
  BigInt D;

  friend bool operator==(const PellUnit&, const PellUnit&) = default;
};

/// One class of solutions of x^2 - D y^2 = rhs: all ±seed·unit^n, n ∈ ℤ,
/// together with their conjugates (x, -y).
struct PellFamily {
  BigInt D;
  BigInt rhs;
  Solution2 seed;  // x, y >= 0; stored n = 0 element
  PellUnit unit;
};

/// x_{n+2} = alpha x_{n+1} + beta x_n, started at (first, second).
struct Recurrence {
  BigInt alpha;
  BigInt beta;
  BigInt first;
  BigInt second;
};

enum class Branch { forward, backward, both };

namespace detail {

inline void require_nonsquare_d(const BigInt& D, const char* who) {
  if (D <= 1) throw std::invalid_argument(std::string(who) + ": D must be > 1");
  if (is_perfect_square(D)) {
    throw std::invalid_argument(std::string(who) + ": D must not be a perfect square");
  }
}

// (x + y√D)(u + v√D)
inline Solution2 mul(const Solution2& a, const BigInt& u, const BigInt& v, const BigInt& D) {
  return {a.x * u + D * a.y * v, a.x * v + a.y * u};
}

inline Solution2 normalized(const Solution2& s) { return {abs(s.x), abs(s.y)}; }

}  // namespace detail

/// Fundamental unit from the periodic continued fraction of √D, using the
/// exact (m, d, a) integer recurrence. Convergents are tested until one
/// solves the equation, which happens at the end of the first (or second,
/// for odd period) period.
inline PellUnit pell_fundamental(const BigInt& D) {
  detail::require_nonsquare_d(D, "pell_fundamental");
  const BigInt a0 = isqrt(D);
  BigInt m = 0;
  BigInt d = 1;
  BigInt a = a0;
  BigInt h_prev = 1, h = a0;
  BigInt k_prev = 0, k = 1;
  while (h * h - D * k * k != 1) {
    m = d * a - m;
    d = (D - m * m) / d;
    a = (a0 + m) / d;
    BigInt h_next = a * h + h_prev;
    BigInt k_next = a * k + k_prev;
    h_prev = std::exchange(h, std::move(h_next));
    k_prev = std::exchange(k, std::move(k_next));
  }
  return {h, k, D};
}

/// True when a and b lie in the same family: b/a or b/conj(a) is a unit of ℤ[√D].
inline bool same_family(const Solution2& a, const Solution2& b, const BigInt& D, const BigInt& rhs) {
  auto quotient_is_integral = [&](const Solution2& p) {
    // b · conj(p) / N(p), with N(p) = rhs
    const BigInt re = b.x * p.x - D * b.y * p.y;
    const BigInt im = b.y * p.x - b.x * p.y;
    return re % rhs == 0 && im % rhs == 0;
  };
  return quotient_is_integral(a) || quotient_is_integral(Solution2{a.x, -a.y});
}

/// All families of x^2 - D y^2 = rhs (rhs < 0), duplicate-free.
///
/// Every class has a representative with 0 <= y <= √(|rhs|(x_p + 1)/(2D)),
/// so an exhaustive scan of that window is complete. A known seed, when
/// given, becomes the representative of its own family.
inline std::vector<PellFamily> solve_generalized(const BigInt& D, const BigInt& rhs,
                                                 const std::optional<Solution2>& known_seed = std::nullopt) {
  detail::require_nonsquare_d(D, "solve_generalized");
  if (rhs >= 0) throw std::invalid_argument("solve_generalized: rhs must be negative");
  const PellUnit unit = pell_fundamental(D);

  std::vector<PellFamily> families;
  auto offer = [&](const Solution2& cand) {
    for (const auto& f : families) {
      if (same_family(f.seed, cand, D, rhs)) return;
    }
    families.push_back({D, rhs, cand, unit});
  };

  if (known_seed) {
    const Solution2 s = detail::normalized(*known_seed);
    if (s.x * s.x - D * s.y * s.y != rhs) {
      throw std::invalid_argument("solve_generalized: known seed does not solve the equation");
    }
    offer(s);
  }
  const BigInt y_max = isqrt((-rhs) * (unit.x + 1) / (2 * D));
  for (BigInt y = 0; y <= y_max; ++y) {
    if (auto x = is_perfect_square(D * y * y + rhs)) offer({*x, y});
  }
  return families;
}

/// Distinct normalized members (x, y >= 0) of a family with x <= x_bound,
/// sorted by x.
///
/// Orienting the seed so that P = x + y√D > 0, the x-coordinate of P·εⁿ is
/// strictly increasing in n (the conjugate factor is negative because the
/// norm is), so each direction can stop once it leaves the window.
inline std::vector<Solution2> family_members_upto(const PellFamily& f, const BigInt& x_bound) {
  const auto& u = f.unit;
  std::set<Solution2> found;
  Solution2 p = detail::normalized(f.seed);
  for (Solution2 cur = p; cur.x <= x_bound; cur = detail::mul(cur, u.x, u.y, f.D)) {
    found.insert(detail::normalized(cur));
  }
  for (Solution2 cur = detail::mul(p, u.x, -u.y, f.D); cur.x >= -x_bound;
       cur = detail::mul(cur, u.x, -u.y, f.D)) {
    if (cur.x <= x_bound) found.insert(detail::normalized(cur));
  }
  return {found.begin(), found.end()};
}

/// Family members, normalized to x, y >= 0.
///
/// forward: seed·εⁿ for n = 0..count-1; backward: seed·ε⁻ⁿ for n = 1..count;
/// both: the `count` smallest distinct members over all n ∈ ℤ.
inline std::vector<Solution2> family_members(const PellFamily& f, std::size_t count, Branch branch = Branch::both) {
  std::vector<Solution2> out;
  if (count == 0) return out;
  const auto& u = f.unit;
  const Solution2 seed = detail::normalized(f.seed);
  switch (branch) {
    case Branch::forward: {
      Solution2 cur = seed;
      for (std::size_t i = 0; i < count; ++i, cur = detail::mul(cur, u.x, u.y, f.D)) {
        out.push_back(detail::normalized(cur));
      }
      break;
    }
    case Branch::backward: {
      Solution2 cur = detail::mul(seed, u.x, -u.y, f.D);
      for (std::size_t i = 0; i < count; ++i, cur = detail::mul(cur, u.x, -u.y, f.D)) {
        out.push_back(detail::normalized(cur));
      }
      break;
    }
    case Branch::both: {
      BigInt bound = seed.x + 1;
      for (;;) {
        out = family_members_upto(f, bound);
        if (out.size() >= count) break;
        bound *= 4;
      }
      out.resize(count);
      break;
    }
  }
  for (const auto& s : out) {
    if (s.x * s.x - f.D * s.y * s.y != f.rhs) throw std::logic_error("family member fails its equation");
  }
  return out;
}

inline Recurrence family_recurrence(const PellFamily& f) {
  const Solution2 seed = detail::normalized(f.seed);
  const Solution2 next = detail::mul(seed, f.unit.x, f.unit.y, f.D);
  return {2 * f.unit.x, -1, seed.x, next.x};
}

inline std::vector<BigInt> recurrence_terms(const Recurrence& r, std::size_t count) {
  std::vector<BigInt> out;
  BigInt a = r.first, b = r.second;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(a);
    BigInt c = r.alpha * b + r.beta * a;
    a = std::exchange(b, std::move(c));
  }
  return out;
}

/// Nonnegative x with s*^2 x^2 - y^2 = -q^2 s*^2 solvable, where
/// qsq_scaled = q^2 s*^2. Factor (y - s* x)(y + s* x) over divisors d:
/// x = |q^2 s*^2 / d - d| / (2 s*).
inline std::vector<BigInt> divisor_solutions_D1(const BigInt& qsq_scaled, const BigInt& s_star) {
  if (qsq_scaled < 1 || s_star < 1) throw std::invalid_argument("divisor_solutions_D1: arguments must be positive");
  std::set<BigInt> xs;
  for (const BigInt& d : divisors(qsq_scaled)) {
    const BigInt diff = qsq_scaled / d - d;
    if (diff % (2 * s_star) == 0) xs.insert(abs(diff) / (2 * s_star));
  }
  return {xs.begin(), xs.end()};
}

}  // namespace qrevival
