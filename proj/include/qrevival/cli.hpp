#pragma once

// Command-line front end. run_cli() does all the work so tests can drive it
// in-process; tools/qrevival.cpp only forwards argv.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lorentz.hpp"
#include "numtheory.hpp"
#include "pell.hpp"
#include "render.hpp"
#include "revivals.hpp"
#include "wave.hpp"

namespace qrevival::cli {

using Json = nlohmann::ordered_json;

/// Malformed argument text; reported as a usage error.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

template <typename Fn>
auto usage_guard(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

inline BigInt int_arg(const std::string& name, const std::string& text) {
  return usage_guard("--" + name, [&] { return parse_bigint(text); });
}

inline Rational qsq_arg(const std::string& text) {
  const Rational q = usage_guard("--qsq", [&] { return parse_rational(text); });
  if (q <= 0) throw UsageError("--qsq: q^2 must be positive");
  return q;
}

inline Rational rational_arg(const std::string& name, const std::string& text) {
  return usage_guard("--" + name, [&] { return parse_rational(text); });
}

/// "3,5,-15" (1D) or "1:2,-2:5" (2D).
inline std::vector<QuantumNumber> members_arg(const std::string& text, int dim) {
  std::vector<QuantumNumber> out;
  for (const auto& item : split(text, ',')) {
    if (dim == 1) {
      out.push_back({0, int_arg("members", item)});
    } else {
      const auto parts = split(item, ':');
      if (parts.size() != 2) throw UsageError("--members: 2D members are written k:l, got '" + item + "'");
      out.push_back({int_arg("members", parts[0]), int_arg("members", parts[1])});
    }
  }
  if (out.empty()) throw UsageError("--members: empty list");
  return out;
}

inline QuantumNumber pivot_arg(const std::string& text, int dim) {
  const auto v = members_arg(text, dim);
  if (v.size() != 1) throw UsageError("--pivot: exactly one quantum number expected");
  return v.front();
}

/// "const", "const:2", "power:-0.25" or "list:1,0.5,..." (real values).
inline CoefficientRule coeff_arg(const std::string& text) {
  auto number = [&](const std::string& s) {
    return usage_guard("--coeffs", [&] {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
      return v;
    });
  };
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "const") return CoefficientRule::constant(rest.empty() ? 1.0 : number(rest));
  if (kind == "power") {
    if (rest.empty()) throw UsageError("--coeffs: power needs an exponent, e.g. power:-0.25");
    return CoefficientRule::power_law(number(rest));
  }
  if (kind == "list") {
    std::vector<Complex> values;
    for (const auto& s : split(rest, ',')) values.emplace_back(number(s), 0.0);
    return CoefficientRule::explicit_list(std::move(values));
  }
  throw UsageError("--coeffs: expected const, power:<exponent> or list:<values>");
}

inline int dim_arg(int dim) {
  if (dim != 1 && dim != 2) throw UsageError("--dim must be 1 or 2");
  return dim;
}

inline Json qn_json(const QuantumNumber& n, int dim) {
  if (dim == 1) return to_string(n.n2);
  return Json::array({to_string(n.n1), to_string(n.n2)});
}

inline Json members_json(const std::vector<QuantumNumber>& ms, int dim) {
  Json a = Json::array();
  for (const auto& n : ms) a.push_back(qn_json(n, dim));
  return a;
}

inline Json params_json(const ModelParams& p) {
  return {{"qsq", to_string(p.qsq)}, {"dim", p.dimension}, {"irrational", p.irrational}};
}

inline Json decomp_json(const RationalSqfDecomp& d) {
  return {{"D", to_string(d.D)}, {"s", to_string(d.s)}, {"D_star", to_string(d.D_star)}, {"s_star", to_string(d.s_star)}};
}

inline Json report_json(const RevivalReport& r) {
  const int dim = r.params.dimension;
  Json ratios = Json::array();
  for (const auto& q : r.ratios) ratios.push_back(to_string(q));
  Json mult = Json::array();
  for (const auto& m : r.multiplicities) mult.push_back(to_string(m));
  return {{"pivot", qn_json(r.pivot, dim)},
          {"members", members_json(r.members, dim)},
          {"ratios", ratios},
          {"multiplicities", mult},
          {"L", to_string(r.L)},
          {"omega0_sq", to_string(r.omega0_sq)},
          {"omega0", r.omega0},
          {"T_rev", r.t_rev_symbolic()},
          {"T_rev_float", r.t_rev()}};
}

inline Json solution_json(const Solution2& s) { return Json::array({to_string(s.x), to_string(s.y)}); }

inline Json family_json(const PellFamily& f, std::size_t count) {
  const Recurrence r = family_recurrence(f);
  Json xs = Json::array();
  for (const auto& s : family_members(f, count, Branch::forward)) xs.push_back(to_string(s.x));
  return {{"seed", solution_json(f.seed)},
          {"recurrence", {{"alpha", to_string(r.alpha)}, {"beta", to_string(r.beta)}, {"first", to_string(r.first)},
                          {"second", to_string(r.second)}}},
          {"forward_x", xs}};
}

struct Common {
  std::string qsq = "1";
  int dim = 1;
  bool irrational = false;
  std::string members;
  std::string pivot;
  std::string coeffs = "const";

  ModelParams params() const { return {qsq_arg(qsq), dim_arg(dim), irrational}; }
  std::vector<QuantumNumber> member_list() const { return members_arg(members, dim); }
  std::optional<QuantumNumber> pivot_opt() const {
    if (pivot.empty()) return std::nullopt;
    return pivot_arg(pivot, dim);
  }
  State state() const {
    const ModelParams p = params();
    const auto ms = member_list();
    const CoefficientRule rule = coeff_arg(coeffs);
    return make_state(p, ms, rule, pivot_opt());
  }
};

inline void add_common(CLI::App* sub, Common& c, bool with_coeffs) {
  sub->add_option("--qsq", c.qsq, "q^2 as an integer or p/r")->required();
  sub->add_option("--dim", c.dim, "torus dimension, 1 or 2")->default_val(1);
  sub->add_flag("--irrational", c.irrational, "treat q^2 as irrational");
  sub->add_option("--members", c.members, "1D: l1,l2,...  2D: k1:l1,k2:l2,...")->required();
  sub->add_option("--pivot", c.pivot, "pivot quantum number (default: first member)");
  if (with_coeffs) sub->add_option("--coeffs", c.coeffs, "const[:v] | power:<exponent> | list:<v1,v2,...>");
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Exact quantum revivals of a Dirac particle on the circle and the square torus"};
  app.name("qrevival");
  app.require_subcommand(1);

  std::string value, n_text, D_text, rhs_text = "", seed_text, l0_text, k0_text, bound_text, x_bound_text;
  std::size_t count = 12;
  int generator_bound = 2;
  bool orbit_check = false;
  Common c;
  std::size_t samples = 1000;
  double tol = 1e-9;
  double floor = 1e-3;
  std::uint64_t rng_seed = 0x5eed;
  std::size_t width = 256, height = 256;
  double vis = 1.0;
  bool endpoints = false;
  unsigned threads = 0;
  std::string out_path, times_text = "0,1/10,1/5,3/10", window_text = "1/4", component_text = "lower", theta_text = "0";
  std::string format_text, snap_format_text = "ppm";

  auto* decomp = app.add_subcommand("decomp", "squarefree decomposition of a positive rational");
  decomp->add_option("--value", value, "integer or p/r")->required();

  auto* pell = app.add_subcommand("pell", "fundamental unit, and families of x^2 - D y^2 = rhs when --rhs is given");
  pell->add_option("--D", D_text, "nonsquare D > 1")->required();
  pell->add_option("--rhs", rhs_text, "negative right-hand side");
  pell->add_option("--count", count, "members listed per family")->default_val(12);

  auto* n01 = app.add_subcommand("n0-1d", "maximal revival set for a 1D pivot");
  n01->add_option("--l0", l0_text, "pivot l0")->required();
  n01->add_option("--qsq", c.qsq, "q^2 as an integer or p/r")->required();
  n01->add_option("--bound", bound_text, "keep |l| <= bound")->required();
  n01->add_flag("--irrational", c.irrational, "treat q^2 as irrational");

  auto* n02 = app.add_subcommand("n0-2d", "maximal revival set for a 2D pivot");
  n02->add_option("--k0", k0_text, "pivot k0")->required();
  n02->add_option("--l0", l0_text, "pivot l0")->required();
  n02->add_option("--qsq", c.qsq, "q^2 as an integer or p/r")->required();
  n02->add_option("--bound", bound_text, "keep k^2 + l^2 <= bound^2")->required();
  n02->add_flag("--irrational", c.irrational, "treat q^2 as irrational");
  n02->add_flag("--orbit-check", orbit_check, "cross-check the scan against the automorph orbit");
  n02->add_option("--generator-bound", generator_bound, "entry bound for orbit generators")->default_val(2);

  auto* orb = app.add_subcommand("orbit", "orbit of a point on D x^2 - y^2 - z^2 = rhs under integral automorphs");
  orb->add_option("--D", D_text, "squarefree D >= 1")->required();
  orb->add_option("--seed", seed_text, "x,y,z")->required();
  orb->add_option("--x-bound", x_bound_text, "keep |x| <= bound")->required();
  orb->add_option("--generator-bound", generator_bound, "entry bound for generators")->default_val(2);

  auto* rt = app.add_subcommand("revival-time", "exact ratios, L and T_rev for a member list");
  add_common(rt, c, false);

  auto* ver = app.add_subcommand("verify", "numeric revival and minimality check");
  add_common(ver, c, true);
  ver->add_option("--samples", samples, "random sample points")->default_val(1000);
  ver->add_option("--tol", tol, "tolerance at T_rev")->default_val(1e-9);
  ver->add_option("--floor", floor, "minimum deviation at T_rev/p")->default_val(1e-3);
  ver->add_option("--seed", rng_seed, "RNG seed");

  auto* carp = app.add_subcommand("carpet", "1D quantum carpet image");
  add_common(carp, c, true);
  carp->add_option("--width", width)->default_val(256);
  carp->add_option("--height", height)->default_val(256);
  carp->add_option("--vis", vis, "visualization exponent")->default_val(1.0);
  carp->add_flag("--endpoints", endpoints, "sample t at 0..T_rev inclusive instead of column centers");
  carp->add_option("--threads", threads, "render workers (default: THREADS or all cores)");
  carp->add_option("--out", out_path, ".ppm or .png")->required();
  carp->add_option("--format", format_text, "ppm | png (default: from extension)");

  auto* snap = app.add_subcommand("snapshots", "2D density snapshots at rational fractions of T_rev");
  add_common(snap, c, true);
  snap->add_option("--times", times_text, "comma list of fractions of T_rev")->default_val("0,1/10,1/5,3/10");
  snap->add_option("--width", width)->default_val(256);
  snap->add_option("--height", height)->default_val(256);
  snap->add_option("--vis", vis, "visualization exponent")->default_val(1.0);
  snap->add_option("--threads", threads);
  snap->add_option("--out", out_path, "output prefix; files are <prefix>_<k>.<format>")->required();
  snap->add_option("--format", snap_format_text, "ppm | png")->capture_default_str();

  auto* nod = app.add_subcommand("nodal", "nodal lines of one spinor component");
  add_common(nod, c, true);
  nod->add_option("--width", width)->default_val(256);
  nod->add_option("--height", height)->default_val(256);
  nod->add_option("--window", window_text, "half window in turns (1/4 is pi/2)")->default_val("1/4");
  nod->add_option("--component", component_text, "upper | lower")->default_val("lower");
  nod->add_option("--theta", theta_text, "time as a fraction of T_rev")->default_val("0");
  nod->add_option("--threads", threads);
  nod->add_option("--out", out_path, ".ppm or .png")->required();
  nod->add_option("--format", format_text, "ppm | png (default: from extension)");

  auto* two = app.add_subcommand("two-squares", "representations of n as a sum of two squares");
  two->add_option("--n", n_text, "positive integer")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  auto image_format = [&](const std::string& path) {
    if (format_text.empty()) return usage_guard("--out", [&] { return format_from_path(path); });
    if (format_text == "ppm") return ImageFormat::ppm;
    if (format_text == "png") return ImageFormat::png;
    throw UsageError("--format must be ppm or png");
  };
  auto ext = [](ImageFormat f) { return f == ImageFormat::png ? ".png" : ".ppm"; };

  Json doc;
  try {
    if (decomp->parsed()) {
      const Rational v = rational_arg("value", value);
      if (v <= 0) throw UsageError("--value must be positive");
      doc["command"] = "decomp";
      doc["input"] = {{"value", to_string(v)}};
      const auto d = rational_squarefree_decompose(v);
      doc["D"] = to_string(d.D);
      doc["s"] = to_string(d.s);
      if (denominator_of(v) != 1) {
        doc["D_star"] = to_string(d.D_star);
        doc["s_star"] = to_string(d.s_star);
      }
    } else if (pell->parsed()) {
      const BigInt D = int_arg("D", D_text);
      doc["command"] = "pell";
      doc["input"] = {{"D", to_string(D)}};
      const PellUnit u = pell_fundamental(D);
      doc["unit"] = {to_string(u.x), to_string(u.y)};
      if (!rhs_text.empty()) {
        const BigInt rhs = int_arg("rhs", rhs_text);
        doc["input"]["rhs"] = to_string(rhs);
        doc["input"]["count"] = count;
        Json fams = Json::array();
        for (const auto& f : solve_generalized(D, rhs)) fams.push_back(family_json(f, count));
        doc["families"] = fams;
      }
    } else if (n01->parsed()) {
      const ModelParams p{qsq_arg(c.qsq), 1, c.irrational};
      const BigInt l0 = int_arg("l0", l0_text);
      const BigInt bound = int_arg("bound", bound_text);
      doc["command"] = "n0-1d";
      doc["input"] = {{"l0", to_string(l0)}, {"bound", to_string(bound)}, {"params", params_json(p)}};
      const RevivalSet set = n0_1d(l0, p, bound);
      doc["method"] = set.method;
      doc["truncation_bound"] = to_string(set.bound);
      if (set.decomp) doc["decomp"] = decomp_json(*set.decomp);
      Json fams = Json::array();
      for (const auto& f : set.families) {
        const Recurrence r = family_recurrence(f);
        fams.push_back({{"D", to_string(f.D)},
                        {"rhs", to_string(f.rhs)},
                        {"seed", solution_json(f.seed)},
                        {"recurrence", {{"alpha", to_string(r.alpha)}, {"beta", to_string(r.beta)}}}});
      }
      doc["families"] = fams;
      if (!fams.empty()) doc["recurrence"] = fams.front()["recurrence"];
      doc["members"] = members_json(set.members, 1);
      doc["revival"] = report_json(revival_time(set.members, set.pivot, p));
    } else if (n02->parsed()) {
      const ModelParams p{qsq_arg(c.qsq), 2, c.irrational};
      const BigInt k0 = int_arg("k0", k0_text);
      const BigInt l0 = int_arg("l0", l0_text);
      const BigInt bound = int_arg("bound", bound_text);
      doc["command"] = "n0-2d";
      doc["input"] = {{"k0", to_string(k0)}, {"l0", to_string(l0)}, {"bound", to_string(bound)}, {"params", params_json(p)}};
      const RevivalSet set = n0_2d(k0, l0, p, bound, {orbit_check, generator_bound});
      doc["method"] = set.method;
      doc["truncation_bound"] = to_string(set.bound);
      if (set.decomp) doc["decomp"] = decomp_json(*set.decomp);
      doc["members"] = members_json(set.members, 2);
      if (set.orbit_check) {
        doc["orbit_check"] = {{"generator_bound", set.orbit_check->generator_bound},
                              {"orbit_members", set.orbit_check->orbit_members},
                              {"subset_of_scan", set.orbit_check->subset_of_scan},
                              {"equals_scan", set.orbit_check->equals_scan}};
      }
      doc["revival"] = report_json(revival_time(set.members, set.pivot, p));
    } else if (orb->parsed()) {
      const BigInt D = int_arg("D", D_text);
      const auto parts = split(seed_text, ',');
      if (parts.size() != 3) throw UsageError("--seed: expected x,y,z");
      const Solution3 seed{int_arg("seed", parts[0]), int_arg("seed", parts[1]), int_arg("seed", parts[2])};
      const BigInt x_bound = int_arg("x-bound", x_bound_text);
      const BigInt rhs = form_value(seed, D);
      doc["command"] = "orbit";
      doc["input"] = {{"D", to_string(D)},
                      {"seed", {to_string(seed.x), to_string(seed.y), to_string(seed.z)}},
                      {"x_bound", to_string(x_bound)},
                      {"generator_bound", generator_bound}};
      doc["rhs"] = to_string(rhs);
      const auto gammas = enumerate_gamma(D, generator_bound);
      const auto gens = automorphs_of(gammas, D);
      doc["generator_count"] = gens.size();
      Json pts = Json::array();
      for (const auto& v : orbit(seed, D, rhs, gens, x_bound)) {
        pts.push_back({to_string(v.x), to_string(v.y), to_string(v.z)});
      }
      doc["truncation_bound"] = to_string(x_bound);
      doc["points"] = pts;
    } else if (rt->parsed()) {
      const ModelParams p = c.params();
      const auto ms = c.member_list();
      doc["command"] = "revival-time";
      doc["input"] = {{"params", params_json(p)}, {"members", members_json(ms, p.dimension)}};
      const QuantumNumber pivot = c.pivot_opt().value_or(ms.front());
      const RevivalReport r = revival_time(ms, pivot, p);
      const Json rep = report_json(r);
      for (const auto& [k, v] : rep.items()) doc[k] = v;
      doc["minimal"] = is_minimal_period(r);
    } else if (ver->parsed()) {
      const State s = c.state();
      doc["command"] = "verify";
      doc["input"] = {{"params", params_json(s.params())},
                      {"members", members_json(s.report().members, s.params().dimension)},
                      {"coeffs", c.coeffs},
                      {"samples", samples},
                      {"tol", tol},
                      {"floor", floor},
                      {"seed", rng_seed}};
      const RevivalCheck chk = verify_revival(s, samples, tol, floor, rng_seed);
      doc["L"] = to_string(s.report().L);
      doc["T_rev"] = s.report().t_rev_symbolic();
      doc["max_deviation"] = chk.max_deviation;
      Json ws = Json::array();
      for (const auto& w : chk.witnesses) {
        ws.push_back({{"prime", to_string(w.prime)}, {"deviation", w.deviation}, {"degenerate", w.degenerate}, {"passed", w.passed}});
      }
      doc["witnesses"] = ws;
      doc["passed"] = chk.passed;
    } else if (carp->parsed()) {
      const State s = c.state();
      const ImageFormat fmt = image_format(out_path);
      const ImageGray img = carpet_1d(s, width, height,
                                      {vis, endpoints ? TimeSampling::endpoints : TimeSampling::centers, threads});
      write_image(img, out_path, fmt);
      doc["command"] = "carpet";
      doc["input"] = {{"params", params_json(s.params())}, {"coeffs", c.coeffs}, {"width", width}, {"height", height},
                      {"vis", vis}, {"time_sampling", endpoints ? "endpoints" : "centers"}};
      doc["L"] = to_string(s.report().L);
      doc["T_rev"] = s.report().t_rev_symbolic();
      doc["files"] = {out_path};
    } else if (snap->parsed()) {
      const State s = c.state();
      std::vector<Rational> times;
      for (const auto& t : split(times_text, ',')) {
        if (!t.empty()) times.push_back(rational_arg("times", t));
      }
      if (snap_format_text != "ppm" && snap_format_text != "png") throw UsageError("--format must be ppm or png");
      const ImageFormat fmt = snap_format_text == "png" ? ImageFormat::png : ImageFormat::ppm;
      const auto imgs = snapshots_2d(s, times, width, height, {vis, threads});
      Json files = Json::array();
      for (std::size_t k = 0; k < imgs.size(); ++k) {
        const std::string path = out_path + "_" + std::to_string(k) + ext(fmt);
        write_image(imgs[k], path, fmt);
        files.push_back(path);
      }
      Json ts = Json::array();
      for (const auto& t : times) ts.push_back(to_string(t));
      doc["command"] = "snapshots";
      doc["input"] = {{"params", params_json(s.params())}, {"coeffs", c.coeffs}, {"times", ts}, {"width", width},
                      {"height", height}, {"vis", vis}};
      doc["L"] = to_string(s.report().L);
      doc["T_rev"] = s.report().t_rev_symbolic();
      doc["files"] = files;
    } else if (nod->parsed()) {
      const State s = c.state();
      const ImageFormat fmt = image_format(out_path);
      NodalOptions opt;
      if (component_text == "upper") {
        opt.component = SpinorComponent::upper;
      } else if (component_text != "lower") {
        throw UsageError("--component must be upper or lower");
      }
      const Rational window = rational_arg("window", window_text);
      if (window <= 0) throw UsageError("--window must be positive");
      opt.half_window = Turn::from(window);
      opt.theta = rational_arg("theta", theta_text);
      opt.threads = threads;
      const NodalResult res = nodal_lines(s, width, height, opt);
      write_image(res.image, out_path, fmt);
      doc["command"] = "nodal";
      doc["input"] = {{"params", params_json(s.params())}, {"coeffs", c.coeffs}, {"width", width}, {"height", height},
                      {"window", to_string(window)}, {"component", component_text}, {"theta", to_string(opt.theta)}};
      doc["degenerate"] = res.degenerate;
      doc["files"] = {out_path};
    } else if (two->parsed()) {
      const BigInt n = int_arg("n", n_text);
      if (n < 1) throw UsageError("--n must be positive");
      doc["command"] = "two-squares";
      doc["input"] = {{"n", to_string(n)}};
      Json base = Json::array();
      for (const auto& [a, b] : two_squares_representations(n)) base.push_back({to_string(a), to_string(b)});
      Json sgn = Json::array();
      for (const auto& [a, b] : signed_two_squares(n)) sgn.push_back({to_string(a), to_string(b)});
      doc["base_pairs"] = base;
      doc["signed_count"] = sgn.size();
      doc["signed"] = sgn;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  out << doc.dump(2) << "\n";
  return 0;
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, out, err);
}

}  // namespace qrevival::cli
