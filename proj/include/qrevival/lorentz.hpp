#pragma once

// Integral automorphs of D x^2 - y^2 - z^2 obtained as images of the group
// Γ ⊂ PSL2(ℝ), and orbits of lattice solutions under them.

#include <array>
#include <compare>
#include <cstdint>
#include <deque>
#include <set>
#include <stdexcept>
#include <vector>

#include "numtheory.hpp"

namespace qrevival {

/// Normalizing factor of an element of Γ: M, M/√2 or M/2. The value is the
/// determinant of the unscaled M.
enum class GammaScale : int { one = 1, half_sqrt2 = 2, half = 4 };

/// Element of Γ in the parametrization
///   M = [[-a - c√D, -b - d√D], [b - d√D, -a + c√D]] / √k,
/// with det M = a^2 + b^2 - D(c^2 + d^2) = k before scaling.
struct GammaElement {
  BigInt a, b, c, d;
  GammaScale scale = GammaScale::one;

  friend bool operator==(const GammaElement&, const GammaElement&) = default;
};

/// SL2 element [[a, b], [c, d]] of the theta group (D = 1 only). In the
/// coset C_θ the stored integers are √2 times the actual (odd) entries.
struct ThetaElement {
  BigInt a, b, c, d;
  bool coset = false;

  friend bool operator==(const ThetaElement&, const ThetaElement&) = default;
};

struct Matrix3 {
  std::array<std::array<BigInt, 3>, 3> m{};

  static Matrix3 identity() {
    Matrix3 r;
    for (int i = 0; i < 3; ++i) r.m[i][i] = 1;
    return r;
  }
  static Matrix3 diagonal(const BigInt& a, const BigInt& b, const BigInt& c) {
    Matrix3 r;
    r.m[0][0] = a;
    r.m[1][1] = b;
    r.m[2][2] = c;
    return r;
  }

  const BigInt& operator()(int i, int j) const { return m[i][j]; }
  BigInt& operator()(int i, int j) { return m[i][j]; }

  Matrix3 transposed() const {
    Matrix3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }

  BigInt determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  /// Adjugate; equals the inverse when det = 1.
  Matrix3 adjugate() const {
    Matrix3 r;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
        const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        r.m[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
      }
    }
    return r;
  }

  friend Matrix3 operator*(const Matrix3& a, const Matrix3& b) {
    Matrix3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r.m[i][j] += a.m[i][k] * b.m[k][j];
    return r;
  }

  friend bool operator==(const Matrix3&, const Matrix3&) = default;
  friend bool operator<(const Matrix3& a, const Matrix3& b) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (a.m[i][j] != b.m[i][j]) return a.m[i][j] < b.m[i][j];
    return false;
  }
};

using Automorph = Matrix3;

/// Lattice point on D x^2 - y^2 - z^2 = rhs.
struct Solution3 {
  BigInt x, y, z;

  friend bool operator==(const Solution3&, const Solution3&) = default;
  friend bool operator<(const Solution3& a, const Solution3& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  }
};

inline Solution3 operator*(const Matrix3& A, const Solution3& v) {
  return {A(0, 0) * v.x + A(0, 1) * v.y + A(0, 2) * v.z,
          A(1, 0) * v.x + A(1, 1) * v.y + A(1, 2) * v.z,
          A(2, 0) * v.x + A(2, 1) * v.y + A(2, 2) * v.z};
}

inline BigInt form_value(const Solution3& v, const BigInt& D) { return D * v.x * v.x - v.y * v.y - v.z * v.z; }

inline BigInt gamma_determinant(const GammaElement& g, const BigInt& D) {
  return g.a * g.a + g.b * g.b - D * (g.c * g.c + g.d * g.d);
}

/// F(M): the image of a Γ element, divided by its scale.
inline Automorph map_to_automorph(const GammaElement& g, const BigInt& D) {
  const BigInt k = static_cast<int>(g.scale);
  if (gamma_determinant(g, D) != k) {
    throw std::invalid_argument("map_to_automorph: determinant condition a^2+b^2-D(c^2+d^2)=k violated");
  }
  const auto& [a, b, c, d, scale] = g;
  Matrix3 raw;
  raw(0, 0) = a * a + b * b + D * (c * c + d * d);
  raw(0, 1) = -2 * a * c + 2 * b * d;
  raw(0, 2) = -2 * b * c - 2 * a * d;
  raw(1, 0) = -2 * D * (a * c + b * d);
  raw(1, 1) = a * a - b * b + D * (c * c - d * d);
  raw(1, 2) = 2 * a * b + 2 * D * c * d;
  raw(2, 0) = 2 * D * (b * c - a * d);
  raw(2, 1) = -2 * a * b + 2 * D * c * d;
  raw(2, 2) = a * a - b * b - D * (c * c - d * d);
  for (auto& row : raw.m) {
    for (auto& e : row) {
      if (e % k != 0) throw std::invalid_argument("map_to_automorph: non-integral image, coset parity violated");
      e /= k;
    }
  }
  return raw;
}

/// D = 1 image through the SL2 ↔ SO+(1,2) isomorphism; independent of
/// map_to_automorph and used to cross-check it.
inline Automorph map_theta_to_automorph(const ThetaElement& t) {
  const auto& [a, b, c, d, coset] = t;
  if (a * d - b * c != (coset ? 2 : 1)) throw std::invalid_argument("map_theta_to_automorph: determinant is not 1");
  if (coset) {
    if (a % 2 == 0 || b % 2 == 0 || c % 2 == 0 || d % 2 == 0) {
      throw std::invalid_argument("map_theta_to_automorph: coset entries must be odd multiples of 1/sqrt2");
    }
  } else if ((a + b + c + d) % 2 != 0) {
    throw std::invalid_argument("map_theta_to_automorph: a+b+c+d must be even");
  }
  // Twice the isomorphism image, evaluated on the stored integers.
  Matrix3 twice;
  twice(0, 0) = a * a + b * b + c * c + d * d;
  twice(0, 1) = -a * a + b * b - c * c + d * d;
  twice(0, 2) = -2 * (a * b + c * d);
  twice(1, 0) = -a * a - b * b + c * c + d * d;
  twice(1, 1) = a * a - b * b - c * c + d * d;
  twice(1, 2) = 2 * (a * b - c * d);
  twice(2, 0) = -2 * (a * c + b * d);
  twice(2, 1) = 2 * (a * c - b * d);
  twice(2, 2) = 2 * (a * d + b * c);
  const int divisor = coset ? 4 : 2;
  for (auto& row : twice.m) {
    for (auto& e : row) {
      if (e % divisor != 0) throw std::logic_error("map_theta_to_automorph: non-integral image");
      e /= divisor;
    }
  }
  return twice;
}

/// Aᵀ J A = J with J = diag(D, -1, -1), det A = 1 and A(0,0) > 0.
inline bool automorph_check(const Automorph& A, const BigInt& D) {
  const Matrix3 J = Matrix3::diagonal(D, -1, -1);
  return A.transposed() * J * A == J && A.determinant() == 1 && A(0, 0) > 0;
}

namespace detail {

template <class T>
bool leading_positive(const T& a, const T& b, const T& c, const T& d) {
  for (const auto* v : {&a, &b, &c, &d}) {
    if (*v != 0) return *v > 0;
  }
  return true;
}

}  // namespace detail

/// Γ elements with max(|a|,|b|,|c|,|d|) <= entry_bound, one per ± pair.
/// Determinants k = 1, 2 always qualify; k = 4 only with all entries odd.
inline std::vector<GammaElement> enumerate_gamma(const BigInt& D, std::int64_t entry_bound) {
  if (!is_squarefree(D)) throw std::invalid_argument("enumerate_gamma: D must be squarefree and positive");
  std::vector<GammaElement> out;
  const std::int64_t B = entry_bound;
  for (std::int64_t a = -B; a <= B; ++a)
    for (std::int64_t b = -B; b <= B; ++b)
      for (std::int64_t c = -B; c <= B; ++c)
        for (std::int64_t d = -B; d <= B; ++d) {
          if (!detail::leading_positive(a, b, c, d)) continue;
          const BigInt k = BigInt(a * a + b * b) - D * (c * c + d * d);
          GammaScale scale;
          if (k == 1) {
            scale = GammaScale::one;
          } else if (k == 2) {
            scale = GammaScale::half_sqrt2;
          } else if (k == 4 && (a & 1) && (b & 1) && (c & 1) && (d & 1)) {
            scale = GammaScale::half;
          } else {
            continue;
          }
          out.push_back({a, b, c, d, scale});
        }
  return out;
}

/// Γ_θ ∪ C_θ for D = 1 with actual matrix entries bounded by entry_bound.
inline std::vector<ThetaElement> enumerate_theta_group(std::int64_t entry_bound) {
  std::vector<ThetaElement> out;
  const std::int64_t B = entry_bound;
  for (std::int64_t a = -B; a <= B; ++a)
    for (std::int64_t b = -B; b <= B; ++b)
      for (std::int64_t c = -B; c <= B; ++c)
        for (std::int64_t d = -B; d <= B; ++d) {
          if (!detail::leading_positive(a, b, c, d)) continue;
          if (a * d - b * c == 1 && (a + b + c + d) % 2 == 0) out.push_back({a, b, c, d, false});
        }
  // Coset entries are u/√2 with u odd; |u/√2| <= B means u^2 <= 2B^2.
  std::int64_t U = 0;
  while ((U + 1) * (U + 1) <= 2 * B * B) ++U;
  for (std::int64_t a = -U; a <= U; ++a)
    for (std::int64_t b = -U; b <= U; ++b)
      for (std::int64_t c = -U; c <= U; ++c)
        for (std::int64_t d = -U; d <= U; ++d) {
          if (!detail::leading_positive(a, b, c, d)) continue;
          if ((a & 1) && (b & 1) && (c & 1) && (d & 1) && a * d - b * c == 2) out.push_back({a, b, c, d, true});
        }
  return out;
}

inline std::vector<Automorph> automorphs_of(const std::vector<GammaElement>& gs, const BigInt& D) {
  std::set<Automorph> seen;
  for (const auto& g : gs) seen.insert(map_to_automorph(g, D));
  return {seen.begin(), seen.end()};
}

/// The eight images (y, z) -> (±y, ±z), (±z, ±y).
inline std::vector<Solution3> sign_swap_images(const Solution3& v) {
  std::set<Solution3> out;
  for (int sy : {1, -1})
    for (int sz : {1, -1}) {
      out.insert({v.x, sy * v.y, sz * v.z});
      out.insert({v.x, sz * v.z, sy * v.y});
    }
  return {out.begin(), out.end()};
}

/// Breadth-first closure of the seed under the generators, their inverses
/// and the sign/swap symmetries, restricted to |x| <= x_bound. Points
/// outside the window are not expanded.
inline std::vector<Solution3> orbit(const Solution3& seed, const BigInt& D, const BigInt& rhs,
                                    const std::vector<Automorph>& generators, const BigInt& x_bound) {
  if (form_value(seed, D) != rhs) throw std::invalid_argument("orbit: seed is not on the form");
  std::vector<Automorph> moves = generators;
  for (const auto& g : generators) {
    if (!automorph_check(g, D)) throw std::invalid_argument("orbit: generator is not an integral automorph");
    moves.push_back(g.adjugate());
  }
  auto oriented = [](Solution3 v) {
    if (v.x < 0) v = {-v.x, -v.y, -v.z};
    return v;
  };
  std::set<Solution3> seen;
  std::deque<Solution3> queue;
  auto visit = [&](const Solution3& v) {
    if (abs(v.x) > x_bound) return;
    for (const auto& w : sign_swap_images(oriented(v))) {
      if (seen.insert(w).second) queue.push_back(w);
    }
  };
  visit(seed);
  while (!queue.empty()) {
    const Solution3 v = queue.front();
    queue.pop_front();
    for (const auto& A : moves) visit(A * v);
  }
  for (const auto& v : seen) {
    if (form_value(v, D) != rhs) throw std::logic_error("orbit produced a point off the form");
  }
  return {seen.begin(), seen.end()};
}

struct PowerOrder {
  std::uint64_t order = 0;
  bool capped = false;  // cap reached before A^N ≡ I
};

/// Smallest N >= 1 with A^N ≡ I (mod m), by direct iteration.
inline PowerOrder power_to_identity_mod(const Matrix3& A, const BigInt& m, std::uint64_t cap = 1'000'000) {
  if (m < 1) throw std::invalid_argument("power_to_identity_mod: modulus must be positive");
  if (m == 1) return {1, false};
  auto reduce = [&](Matrix3 X) {
    for (auto& row : X.m)
      for (auto& e : row) {
        e %= m;
        if (e < 0) e += m;
      }
    return X;
  };
  BigInt det = A.determinant() % m;
  if (det < 0) det += m;
  if (boost::multiprecision::gcd(det, m) != 1) throw std::invalid_argument("power_to_identity_mod: matrix not invertible mod m");
  const Matrix3 base = reduce(A);
  const Matrix3 id = Matrix3::identity();
  Matrix3 P = base;
  for (std::uint64_t n = 1; n <= cap; ++n) {
    if (P == id) return {n, false};
    P = reduce(P * base);
  }
  return {cap, true};
}

}  // namespace qrevival
