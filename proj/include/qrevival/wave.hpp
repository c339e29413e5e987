#pragma once

// Plane-wave spinor eigenstates on the circle / square torus, their finite
// superpositions, and numerical revival checks.
//
// Units ħ = c = R = 1, so ω_n = √(n^2 + q^2). The 1/(2π) normalization is
// dropped; densities are relative.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "numtheory.hpp"
#include "revivals.hpp"

namespace qrevival {

using Complex = std::complex<double>;

struct Spinor2 {
  Complex upper;  // (n1 - i n2)/(q + ω) component
  Complex lower;

  double norm_sq() const { return std::norm(upper) + std::norm(lower); }

  friend Spinor2 operator+(Spinor2 a, const Spinor2& b) { return {a.upper + b.upper, a.lower + b.lower}; }
  friend Spinor2 operator-(Spinor2 a, const Spinor2& b) { return {a.upper - b.upper, a.lower - b.lower}; }
  friend bool operator==(const Spinor2&, const Spinor2&) = default;
};

inline double distance(const Spinor2& a, const Spinor2& b) { return std::sqrt((a - b).norm_sq()); }

/// A fraction num/den of a full turn: an angle 2π num/den, or a time
/// θ·T_rev with θ = num/den.
struct Turn {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Turn from(const Rational& r) { return {to_int64(numerator_of(r)), to_int64(denominator_of(r))}; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline double qsq_value(const ModelParams& p) { return p.qsq.convert_to<double>(); }

/// Ψ_n(φ1, φ2, t) at an arbitrary real time.
inline Spinor2 eigenstate(const QuantumNumber& n, const ModelParams& p, double phi1, double phi2, double t) {
  const double q = std::sqrt(qsq_value(p));
  const double n1 = n.n1.convert_to<double>();
  const double n2 = n.n2.convert_to<double>();
  const double omega = std::sqrt(n1 * n1 + n2 * n2 + q * q);
  const double pref = std::sqrt(0.5 * (1.0 + q / omega));
  const Complex wave = std::polar(1.0, n1 * phi1 + n2 * phi2 - omega * t);
  return {pref * Complex(n1, -n2) / (q + omega) * wave, pref * wave};
}

struct Term {
  QuantumNumber n;
  Complex coeff;
};

/// How coefficients are assigned to the members of a state.
struct CoefficientRule {
  enum class Kind { constant, power_law, explicit_list };
  Kind kind = Kind::constant;
  double value = 1.0;  // constant value, or exponent for power_law: c_n = |n|^value
  std::vector<Complex> list;

  static CoefficientRule constant(double v = 1.0) { return {Kind::constant, v, {}}; }
  static CoefficientRule power_law(double exponent) { return {Kind::power_law, exponent, {}}; }
  static CoefficientRule explicit_list(std::vector<Complex> values) {
    return {Kind::explicit_list, 0.0, std::move(values)};
  }
};

inline std::vector<Term> assign_coefficients(const std::vector<QuantumNumber>& members, const CoefficientRule& rule) {
  std::vector<Term> out;
  out.reserve(members.size());
  if (rule.kind == CoefficientRule::Kind::explicit_list && rule.list.size() != members.size()) {
    throw std::invalid_argument("coefficient list length does not match the member count");
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& n = members[i];
    Complex c;
    switch (rule.kind) {
      case CoefficientRule::Kind::constant:
        c = rule.value;
        break;
      case CoefficientRule::Kind::power_law: {
        if (n.norm_sq() == 0) throw std::invalid_argument("power-law coefficient undefined at n = (0,0)");
        c = std::pow(std::sqrt(n.norm_sq().convert_to<double>()), rule.value);
        break;
      }
      case CoefficientRule::Kind::explicit_list:
        c = rule.list[i];
        break;
    }
    out.push_back({n, c});
  }
  return out;
}

/// Φ = Σ c_n Ψ_n with an attached exact revival report.
class State {
public:
  /// The pivot defaults to the first term. Throws NotCoRevivable when the
  /// terms do not share a revival time.
  State(ModelParams params, std::vector<Term> terms, std::optional<QuantumNumber> pivot = std::nullopt)
      : params_(std::move(params)), terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("State: no terms");
    std::vector<QuantumNumber> ns;
    for (const auto& t : terms_) {
      if (t.coeff == Complex(0.0, 0.0)) throw std::invalid_argument("State: zero coefficient");
      if (params_.dimension == 1 && t.n.n1 != 0) throw std::invalid_argument("State: 1D states need n1 = 0");
      ns.push_back(t.n);
    }
    std::vector<QuantumNumber> sorted = ns;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("State: repeated quantum number");
    }
    report_ = revival_time(ns, pivot.value_or(ns.front()), params_);

    const double q = std::sqrt(qsq_value(params_));
    prepared_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      Prepared pr;
      pr.n1 = to_int64(t.n.n1);
      pr.n2 = to_int64(t.n.n2);
      const double n1 = static_cast<double>(pr.n1);
      const double n2 = static_cast<double>(pr.n2);
      pr.omega = std::sqrt(n1 * n1 + n2 * n2 + q * q);
      const double pref = std::sqrt(0.5 * (1.0 + q / pr.omega));
      pr.lower_amp = t.coeff * pref;
      pr.upper_amp = t.coeff * pref * Complex(n1, -n2) / (q + pr.omega);
      pr.m = report_.multiplicities[i];
      pr.m_ld = pr.m.convert_to<long double>();
      prepared_.push_back(pr);
    }
  }

  const ModelParams& params() const { return params_; }
  const std::vector<Term>& terms() const { return terms_; }
  const RevivalReport& report() const { return report_; }

  struct Prepared {
    std::int64_t n1 = 0, n2 = 0;
    double omega = 0.0;
    Complex upper_amp, lower_amp;  // coefficient × normalization × spinor shape
    BigInt m;                      // ω_n T_rev / 2π, exact
    long double m_ld = 0.0L;
  };
  const std::vector<Prepared>& prepared() const { return prepared_; }

private:
  ModelParams params_;
  std::vector<Term> terms_;
  RevivalReport report_;
  std::vector<Prepared> prepared_;
};

inline State make_state(const ModelParams& p, const std::vector<QuantumNumber>& members, const CoefficientRule& rule,
                        std::optional<QuantumNumber> pivot = std::nullopt) {
  return State(p, assign_coefficients(members, rule), pivot);
}

namespace detail {

inline std::int64_t mod_floor(__int128 a, std::int64_t m) {
  __int128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

/// Exact phase reduction: the phase n1 φ1 + n2 φ2 - ω t in turns, reduced
/// mod 1 over a common denominator before converting to floating point.
struct ExactPhases {
  std::int64_t common = 1;
  std::int64_t k1 = 1, k2 = 1, k3 = 1;  // common / den
  Turn phi1, phi2;
  std::vector<std::int64_t> time_residue;  // (m_n · θ.num) mod θ.den, per term

  ExactPhases(const State& s, Turn p1, Turn p2, Turn theta) : phi1(p1), phi2(p2) {
    if (p1.den <= 0 || p2.den <= 0 || theta.den <= 0) throw std::invalid_argument("Turn denominators must be positive");
    common = std::lcm(std::lcm(p1.den, p2.den), theta.den);
    k1 = common / p1.den;
    k2 = common / p2.den;
    k3 = common / theta.den;
    time_residue.reserve(s.prepared().size());
    for (const auto& pr : s.prepared()) {
      const std::int64_t m_mod = to_int64(BigInt(pr.m % theta.den));
      time_residue.push_back(mod_floor(static_cast<__int128>(m_mod) * theta.num, theta.den));
    }
  }

  /// Re-targets the spatial point, keeping the time residues.
  void at(Turn p1, Turn p2) {
    if (p1.den * k1 != common || p2.den * k2 != common) throw std::invalid_argument("ExactPhases: denominator changed");
    phi1 = p1;
    phi2 = p2;
  }

  double angle(const State::Prepared& pr, std::size_t idx) const {
    const __int128 num = static_cast<__int128>(mod_floor(static_cast<__int128>(pr.n1) * phi1.num, phi1.den)) * k1 +
                         static_cast<__int128>(mod_floor(static_cast<__int128>(pr.n2) * phi2.num, phi2.den)) * k2 -
                         static_cast<__int128>(time_residue[idx]) * k3;
    const std::int64_t r = mod_floor(num, common);
    return 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(common);
  }
};

}  // namespace detail

/// Per-term contributions c_n Ψ_n at exact turns, in term order.
inline std::vector<Spinor2> term_contributions(const State& s, const detail::ExactPhases& ph) {
  std::vector<Spinor2> out;
  const auto& prep = s.prepared();
  out.reserve(prep.size());
  for (std::size_t i = 0; i < prep.size(); ++i) {
    const Complex w = std::polar(1.0, ph.angle(prep[i], i));
    out.push_back({prep[i].upper_amp * w, prep[i].lower_amp * w});
  }
  return out;
}

inline Spinor2 evaluate_exact(const State& s, const detail::ExactPhases& ph) {
  Spinor2 out{};
  const auto& prep = s.prepared();
  for (std::size_t i = 0; i < prep.size(); ++i) {
    const Complex w = std::polar(1.0, ph.angle(prep[i], i));
    out.upper += prep[i].upper_amp * w;
    out.lower += prep[i].lower_amp * w;
  }
  return out;
}

/// Φ at spatial angles given as exact turns and time θ·T_rev with rational θ.
inline Spinor2 evaluate_exact(const State& s, Turn phi1, Turn phi2, Turn theta) {
  return evaluate_exact(s, detail::ExactPhases(s, phi1, phi2, theta));
}

/// Φ at t = θ·T_rev for real θ; the time phase is frac(θ m_n) in extended
/// precision. Accuracy degrades once θ m_n approaches 1/ε of long double.
inline Spinor2 evaluate(const State& s, double phi1, double phi2, double theta) {
  Spinor2 out{};
  for (const auto& pr : s.prepared()) {
    long double turns = std::fmod(static_cast<long double>(theta) * pr.m_ld, 1.0L);
    const double time_angle = static_cast<double>(2.0L * std::numbers::pi_v<long double> * turns);
    const Complex w = std::polar(1.0, static_cast<double>(pr.n1) * phi1 + static_cast<double>(pr.n2) * phi2 - time_angle);
    out.upper += pr.upper_amp * w;
    out.lower += pr.lower_amp * w;
  }
  return out;
}

/// Φ at a raw time t, using ω_n t directly (no reduction).
inline Spinor2 evaluate_at_time(const State& s, double phi1, double phi2, double t) {
  Spinor2 out{};
  for (const auto& pr : s.prepared()) {
    const Complex w = std::polar(1.0, static_cast<double>(pr.n1) * phi1 + static_cast<double>(pr.n2) * phi2 - pr.omega * t);
    out.upper += pr.upper_amp * w;
    out.lower += pr.lower_amp * w;
  }
  return out;
}

/// Sample i of n on [-w, w] (w = half_window turns), endpoints included.
inline Turn grid_turn(std::size_t i, std::size_t n, Turn half_window) {
  if (n <= 1) return {0, 1};
  const auto span = static_cast<std::int64_t>(n - 1);
  return {half_window.num * (2 * static_cast<std::int64_t>(i) - span), half_window.den * span};
}

struct GridSpec {
  std::size_t nx = 1;  // φ1 samples (1 for 1D)
  std::size_t ny = 1;  // φ2 samples
  Turn half_window{1, 2};
};

/// Φ on an (nx × ny) grid, row-major with φ2 varying slowest.
inline std::vector<Spinor2> evaluate_state(const State& s, const GridSpec& grid, Turn theta) {
  std::vector<Spinor2> out;
  out.reserve(grid.nx * grid.ny);
  detail::ExactPhases ph(s, grid_turn(0, grid.nx, grid.half_window), grid_turn(0, grid.ny, grid.half_window), theta);
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      ph.at(grid_turn(i, grid.nx, grid.half_window), grid_turn(j, grid.ny, grid.half_window));
      out.push_back(evaluate_exact(s, ph));
    }
  }
  return out;
}

struct PrimeWitness {
  BigInt prime;
  double deviation = 0.0;  // max |Φ(t) - Φ(t + T_rev/p)|
  bool degenerate = false;  // every m_n divisible by p: T_rev/p is a true period
  bool passed = false;
};

struct RevivalCheck {
  std::size_t samples = 0;
  double tolerance = 0.0;
  double max_deviation = 0.0;  // max |Φ(t) - Φ(t + T_rev)|
  double witness_floor = 0.0;
  std::vector<PrimeWitness> witnesses;
  bool passed = false;
};

/// Random space-time probe of periodicity at T_rev and non-periodicity at
/// T_rev/p for each prime p | L.
inline RevivalCheck verify_revival(const State& s, std::size_t samples, double tol, double witness_floor = 1e-3,
                                   std::uint64_t seed = 0x5eed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Point {
    double phi1, phi2, theta;
  };
  std::vector<Point> pts(samples);
  for (auto& pt : pts) pt = {s.params().dimension == 2 ? angle(rng) : 0.0, angle(rng), unit(rng)};

  RevivalCheck check;
  check.samples = samples;
  check.tolerance = tol;
  check.witness_floor = witness_floor;
  for (const auto& pt : pts) {
    const double dev = distance(evaluate(s, pt.phi1, pt.phi2, pt.theta), evaluate(s, pt.phi1, pt.phi2, pt.theta + 1.0));
    check.max_deviation = std::max(check.max_deviation, dev);
  }
  bool ok = check.max_deviation <= tol;
  const auto& ms = s.report().multiplicities;
  for (const BigInt& p : prime_factors(s.report().L)) {
    PrimeWitness w;
    w.prime = p;
    w.degenerate = std::all_of(ms.begin(), ms.end(), [&](const BigInt& m) { return m % p == 0; });
    const double shift = 1.0 / p.convert_to<double>();
    for (const auto& pt : pts) {
      const double dev =
          distance(evaluate(s, pt.phi1, pt.phi2, pt.theta), evaluate(s, pt.phi1, pt.phi2, pt.theta + shift));
      w.deviation = std::max(w.deviation, dev);
    }
    w.passed = w.degenerate || w.deviation >= witness_floor;
    ok = ok && w.passed;
    check.witnesses.push_back(w);
  }
  check.passed = ok;
  return check;
}

}  // namespace qrevival
