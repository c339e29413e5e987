#pragma once

// Maximal revival sets N0 for a pivot quantum number, exact frequency ratios
// and the revival time T_rev = 2π L / ω0 (units ħ = c = R = 1).

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lorentz.hpp"
#include "numtheory.hpp"
#include "pell.hpp"

namespace qrevival {

/// Dimensionless q^2 = (McR/ħ)^2 and the torus dimension.
///
/// `irrational` marks q^2 as irrational; `qsq` then only feeds the numerics
/// and the exact layer treats every energy as pairwise incommensurable.
struct ModelParams {
  Rational qsq{1};
  int dimension = 1;
  bool irrational = false;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct QuantumNumber {
  BigInt n1;
  BigInt n2;

  BigInt norm_sq() const { return n1 * n1 + n2 * n2; }

  friend bool operator==(const QuantumNumber&, const QuantumNumber&) = default;
  friend auto operator<=>(const QuantumNumber& a, const QuantumNumber& b) {
    if (a.n1 != b.n1) return a.n1 < b.n1 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.n2 != b.n2) return a.n2 < b.n2 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

inline std::string to_string(const QuantumNumber& n) { return "(" + n.n1.str() + "," + n.n2.str() + ")"; }

struct OrbitCheck {
  int generator_bound = 0;
  std::size_t orbit_members = 0;  // after the divisibility filter, inside the window
  bool subset_of_scan = false;
  bool equals_scan = false;
};

struct RevivalSet {
  ModelParams params;
  QuantumNumber pivot;
  std::vector<QuantumNumber> members;  // sorted, includes pivot
  std::optional<RationalSqfDecomp> decomp;
  std::vector<PellFamily> families;  // 1D Pell route only
  BigInt bound;                      // |ℓ| <= bound (1D), k^2+ℓ^2 <= bound^2 (2D)
  std::string method;                // divisor | pell | scan | single-energy
  std::optional<OrbitCheck> orbit_check;
};

struct RevivalReport {
  ModelParams params;
  QuantumNumber pivot;
  std::vector<QuantumNumber> members;
  std::vector<Rational> ratios;        // a_j / b_j, aligned with members
  BigInt L;                            // lcm of the b_j
  Rational omega0_sq;                  // pivot^2 + q^2 (exact unless irrational)
  double omega0 = 0.0;
  std::vector<BigInt> multiplicities;  // m_j = a_j L / b_j, aligned with members

  double t_rev() const { return 2.0 * std::numbers::pi * L.convert_to<double>() / omega0; }
  /// "2L*pi/omega0" with 2L evaluated.
  std::string t_rev_symbolic() const { return BigInt(2 * L).str() + "*pi/omega0"; }
};

/// Exact a/b with (n^2 + q^2) = (a/b)^2 (n0^2 + q^2).
inline Rational ratio(const QuantumNumber& n, const QuantumNumber& n0, const ModelParams& p) {
  if (p.irrational) {
    if (n.norm_sq() == n0.norm_sq()) return Rational(1);
    throw NotCoRevivable("not co-revivable with pivot: energies differ and q^2 is irrational");
  }
  if (p.qsq <= 0) throw std::invalid_argument("ratio: q^2 must be positive");
  const Rational quotient = (Rational(n.norm_sq()) + p.qsq) / (Rational(n0.norm_sq()) + p.qsq);
  const auto a = is_perfect_square(numerator_of(quotient));
  const auto b = is_perfect_square(denominator_of(quotient));
  if (!a || !b) {
    throw NotCoRevivable("not co-revivable with pivot: " + to_string(n) + " vs " + to_string(n0) +
                         " has irrational frequency ratio");
  }
  return Rational(*a, *b);
}

inline bool co_revivable(const QuantumNumber& n, const QuantumNumber& n0, const ModelParams& p) {
  try {
    ratio(n, n0, p);
    return true;
  } catch (const NotCoRevivable&) {
    return false;
  }
}

namespace detail {

inline void add_signed(std::set<QuantumNumber>& out, const BigInt& x) {
  out.insert({0, x});
  out.insert({0, -x});
}

/// q^2 D* s*^2, an integer because D* s*^2 is the denominator of n0^2 + q^2.
inline BigInt scaled_qsq(const Rational& qsq, const RationalSqfDecomp& dec) {
  const Rational v = qsq * Rational(dec.D_star * dec.s_star * dec.s_star);
  if (denominator_of(v) != 1) throw std::logic_error("scaled q^2 is not integral");
  return numerator_of(v);
}

}  // namespace detail

/// N0 for a 1D pivot (0, l0), truncated to |ℓ| <= bound.
///
/// With n0^2 + q^2 = D s^2 / (D* s*^2) every member solves
/// D* s*^2 x^2 - D y^2 = -q^2 D* s*^2. When D = D* = 1 this factors over
/// divisors; otherwise multiplying by D* gives the Pell equation
/// X^2 - D D* y^2 = -q^2 D*^2 s*^2 with X = D* s* x.
inline RevivalSet n0_1d(const BigInt& l0, const ModelParams& p, const BigInt& bound) {
  if (p.dimension != 1) throw std::invalid_argument("n0_1d: model dimension must be 1");
  if (abs(l0) > bound) throw std::invalid_argument("n0_1d: bound excludes the pivot");
  RevivalSet set;
  set.params = p;
  set.pivot = {0, l0};
  set.bound = bound;
  std::set<QuantumNumber> members;

  if (p.irrational) {
    detail::add_signed(members, l0);
    set.method = "single-energy";
    set.members.assign(members.begin(), members.end());
    return set;
  }

  const RationalSqfDecomp dec = rational_squarefree_decompose(Rational(l0 * l0) + p.qsq);
  const BigInt qs = detail::scaled_qsq(p.qsq, dec);
  set.decomp = dec;
  if (dec.D == 1 && dec.D_star == 1) {
    set.method = "divisor";
    for (const BigInt& x : divisor_solutions_D1(qs, dec.s_star)) {
      if (x <= bound) detail::add_signed(members, x);
    }
  } else {
    set.method = "pell";
    const BigInt scale = dec.D_star * dec.s_star;
    set.families = solve_generalized(dec.D * dec.D_star, -qs * dec.D_star, Solution2{scale * abs(l0), dec.s});
    for (const auto& f : set.families) {
      for (const auto& m : family_members_upto(f, bound * scale)) {
        if (m.x % scale == 0) detail::add_signed(members, m.x / scale);
      }
    }
  }
  set.members.assign(members.begin(), members.end());
  return set;
}

struct N0Options2d {
  bool orbit_check = false;
  int generator_bound = 2;
};

/// N0 for a 2D pivot (k0, l0), truncated to k^2 + ℓ^2 <= bound^2.
///
/// Membership is decided exactly by a full scan of the disc: writing
/// q^2 = P/R, (k, ℓ) is a member iff w(k,ℓ)·w(k0,ℓ0) is a square, where
/// w = (k^2 + ℓ^2) R + P. The optional orbit check regenerates the set from
/// the automorph action on D D* x^2 - Y^2 - Z^2 = q^2 D*^2 s*^2 and keeps
/// the points with D* s* | Y, Z.
inline RevivalSet n0_2d(const BigInt& k0, const BigInt& l0, const ModelParams& p, const BigInt& bound,
                        const N0Options2d& options = {}) {
  if (p.dimension != 2) throw std::invalid_argument("n0_2d: model dimension must be 2");
  const QuantumNumber pivot{k0, l0};
  RevivalSet set;
  set.params = p;
  set.pivot = pivot;
  set.bound = bound;

  if (p.irrational) {
    set.method = "single-energy";
    const BigInt n = pivot.norm_sq();
    if (n == 0) {
      set.members = {pivot};
    } else {
      for (const auto& [a, b] : signed_two_squares(n)) set.members.push_back({a, b});
    }
    return set;
  }

  if (pivot.norm_sq() > bound * bound) throw std::invalid_argument("n0_2d: bound excludes the pivot");
  set.method = "scan";
  const RationalSqfDecomp dec = rational_squarefree_decompose(Rational(pivot.norm_sq()) + p.qsq);
  set.decomp = dec;

  const BigInt P = numerator_of(p.qsq);
  const BigInt R = denominator_of(p.qsq);
  const BigInt w0 = pivot.norm_sq() * R + P;
  const BigInt w_max = 2 * bound * bound * R + P;
  const std::int64_t B = to_int64(bound);
  constexpr auto u64max = std::numeric_limits<std::uint64_t>::max();
  const bool fast = w_max <= u64max && w0 <= u64max;
  const auto w0_u = fast ? static_cast<std::uint64_t>(w0) : 0;
  const auto R_u = fast ? static_cast<std::uint64_t>(R) : 0;
  const auto P_u = fast ? static_cast<std::uint64_t>(P) : 0;

  std::set<QuantumNumber> members;
  for (std::int64_t k = -B; k <= B; ++k) {
    for (std::int64_t l = -B; l <= B; ++l) {
      const auto r2 = static_cast<std::uint64_t>(k * k + l * l);
      if (BigInt(r2) > bound * bound) continue;
      bool member = false;
      if (fast) {
        const std::uint64_t w = r2 * R_u + P_u;
        const std::uint64_t g = std::gcd(w, w0_u);
        member = is_perfect_square(w / g).has_value() && is_perfect_square(w0_u / g).has_value();
      } else {
        const BigInt w = BigInt(r2) * R + P;
        member = is_perfect_square(w * w0).has_value();
      }
      if (member) members.insert({k, l});
    }
  }
  set.members.assign(members.begin(), members.end());

  if (options.orbit_check) {
    const BigInt D = dec.D * dec.D_star;
    const BigInt scale = dec.D_star * dec.s_star;
    const BigInt rhs = detail::scaled_qsq(p.qsq, dec) * dec.D_star;
    const Solution3 seed{dec.s, scale * k0, scale * l0};
    const auto gens = automorphs_of(enumerate_gamma(D, options.generator_bound), D);
    const BigInt x_bound = isqrt((rhs + scale * scale * bound * bound) / D);
    std::set<QuantumNumber> from_orbit;
    for (const auto& v : orbit(seed, D, rhs, gens, x_bound)) {
      if (v.y % scale != 0 || v.z % scale != 0) continue;
      const QuantumNumber n{v.y / scale, v.z / scale};
      if (n.norm_sq() <= bound * bound) from_orbit.insert(n);
    }
    OrbitCheck check;
    check.generator_bound = options.generator_bound;
    check.orbit_members = from_orbit.size();
    check.subset_of_scan = std::includes(members.begin(), members.end(), from_orbit.begin(), from_orbit.end());
    check.equals_scan = from_orbit == members;
    set.orbit_check = check;
  }
  return set;
}

/// Exact ratios, L and phase multiplicities for an explicit member list.
inline RevivalReport revival_time(const std::vector<QuantumNumber>& members, const QuantumNumber& pivot,
                                  const ModelParams& p) {
  if (members.empty()) throw std::invalid_argument("revival_time: empty member list");
  RevivalReport rep;
  rep.params = p;
  rep.pivot = pivot;
  rep.members = members;
  for (const auto& n : members) rep.ratios.push_back(ratio(n, pivot, p));
  std::vector<Rational> with_pivot = rep.ratios;
  with_pivot.emplace_back(1);
  rep.L = lcm_of_denominators(with_pivot);
  for (const auto& r : rep.ratios) {
    rep.multiplicities.push_back(numerator_of(r) * (rep.L / denominator_of(r)));
  }
  rep.omega0_sq = Rational(pivot.norm_sq()) + p.qsq;
  rep.omega0 = std::sqrt(rep.omega0_sq.convert_to<double>());
  return rep;
}

inline RevivalReport revival_time(const RevivalSet& set) { return revival_time(set.members, set.pivot, set.params); }

/// For every prime p | L some multiplicity is not divisible by p, i.e. no
/// T_rev / p is a period.
inline bool is_minimal_period(const RevivalReport& rep) {
  for (const BigInt& prime : prime_factors(rep.L)) {
    const bool all_divisible = std::all_of(rep.multiplicities.begin(), rep.multiplicities.end(),
                                           [&](const BigInt& m) { return m % prime == 0; });
    if (all_divisible) return false;
  }
  return true;
}

inline std::vector<QuantumNumber> intersect_revival_sets(const std::vector<RevivalSet>& sets) {
  if (sets.empty()) throw std::invalid_argument("intersect_revival_sets: no sets");
  std::vector<QuantumNumber> acc = sets.front().members;
  std::sort(acc.begin(), acc.end());
  for (std::size_t i = 1; i < sets.size(); ++i) {
    if (!(sets[i].params == sets.front().params) || sets[i].bound != sets.front().bound) {
      throw std::invalid_argument("intersect_revival_sets: mismatched parameters or bounds");
    }
    std::vector<QuantumNumber> next = sets[i].members;
    std::sort(next.begin(), next.end());
    std::vector<QuantumNumber> out;
    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(), std::back_inserter(out));
    acc = std::move(out);
  }
  return acc;
}

}  // namespace qrevival
