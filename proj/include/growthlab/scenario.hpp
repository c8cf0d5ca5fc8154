#pragma once

// Scenario runner: named recipes that exercise the growth inequalities on
// concrete functions and equations, with JSON reports and CSV plot data.
//
// A scenario passes when every asserted inequality holds, fails when one
// does not, and is inconclusive when a hypothesis check fails or a stage
// throws.  The zoo below is the only source of functions and equations.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "growthlab/analytic_map.hpp"
#include "growthlab/characteristics.hpp"
#include "growthlab/conformal_map.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/explicit_solutions.hpp"
#include "growthlab/ode.hpp"
#include "growthlab/order.hpp"
#include "growthlab/sector.hpp"

namespace growthlab {

inline constexpr int kReportSchemaVersion = 1;

using json = nlohmann::json;

// --------------------------------------------------------------------------
// Config helpers.

namespace detail {

inline const json& require_field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T field_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

inline cplx parse_complex(const json& v, const std::string& where) {
  if (v.is_number()) return cplx{v.get<double>()};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return cplx{v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(where + ": expected a number or [re, im]");
}

}  // namespace detail

// --------------------------------------------------------------------------
// Zoo registry.  Functions: {"zoo": id, ...parameters}.

inline const std::vector<std::string>& zoo_function_ids() {
  static const std::vector<std::string> ids{"identity", "constant", "exp", "h", "exp2", "polynomial"};
  return ids;
}

inline const std::vector<std::string>& zoo_equation_ids() {
  static const std::vector<std::string> ids{"exp-equation", "sine-equation", "h-equation", "double-exp-equation"};
  return ids;
}

inline AnalyticMap zoo_function(const json& spec, const std::string& where = "function") {
  const std::string id = detail::require_field(spec, "zoo", where).get<std::string>();
  if (id == "identity") return zoo::identity();
  if (id == "constant") return zoo::constant(detail::parse_complex(spec.value("value", json(1.0)), where + ".value"));
  if (id == "exp") return zoo::exponential();
  if (id == "h") {
    const double mu = detail::field_or(spec, "mu", 2.0, where);
    if (!(mu > 1.0)) throw ConfigError(where + ".mu: h needs mu > 1");
    return zoo::h_family(mu, detail::field_or(spec, "theta", 0.0, where), detail::field_or(spec, "scale", 1.0, where));
  }
  if (id == "exp2") {
    const double sigma = detail::field_or(spec, "sigma", 0.5, where);
    if (!(sigma > 0.0)) throw ConfigError(where + ".sigma: exp2 needs sigma > 0");
    return zoo::double_exponential(sigma, detail::field_or(spec, "theta", 0.0, where));
  }
  if (id == "polynomial") {
    std::vector<cplx> c;
    const json& arr = detail::require_field(spec, "coeffs", where);
    for (std::size_t i = 0; i < arr.size(); ++i)
      c.push_back(detail::parse_complex(arr[i], where + ".coeffs[" + std::to_string(i) + "]"));
    return zoo::polynomial(std::move(c));
  }
  throw ConfigError(where + ": unknown zoo id '" + id + "'");
}

/// Short label for reports: id plus its parameters.
inline std::string zoo_label(const json& spec) {
  std::string s = spec.value("zoo", std::string("?"));
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    if (it.key() == "zoo") continue;
    s += " " + it.key() + "=" + it.value().dump();
  }
  return s;
}

/// A zoo equation together with what is known about its solutions.
struct ZooEquation {
  std::shared_ptr<const LinearOde> ode;
  std::optional<AnalyticMap> solution;       // explicit solution, ordinary range
  std::optional<LogLogMap> loglog_solution;  // explicit solution, double-exponential range
  std::vector<cplx> seed;                    // solution data at the origin
};

inline ZooEquation zoo_equation(const json& spec, const std::string& where = "equation") {
  const std::string id = detail::require_field(spec, "zoo", where).get<std::string>();
  if (id == "exp-equation") {  // f'' - f = 0, f = e^z
    auto ode = std::make_shared<LinearOde>(std::vector<AnalyticMap>{zoo::constant(-1.0), zoo::constant(0.0)});
    return {ode, zoo::exponential(), std::nullopt, {1.0, 1.0}};
  }
  if (id == "sine-equation") {  // f'' + f = 0, f = sin z
    auto ode = std::make_shared<LinearOde>(std::vector<AnalyticMap>{zoo::constant(1.0), zoo::constant(0.0)});
    auto sine = AnalyticMap::from_value("sin", [](const Jet& z) {
      // sin z = (e^{iz} - e^{-iz}) / 2i
      return (exp(cplx{0, 1} * z) - exp(cplx{0, -1} * z)) / cplx{0, 2};
    });
    return {ode, sine, std::nullopt, {0.0, 1.0}};
  }
  if (id == "h-equation") {  // f'' + A_0 f = 0, f = h
    const double mu = detail::field_or(spec, "mu", 2.0, where);
    if (!(mu > 1.0)) throw ConfigError(where + ".mu: h-equation needs mu > 1");
    auto ode = std::make_shared<LinearOde>(std::vector<AnalyticMap>{zoo::h_equation_coefficient(mu), zoo::constant(0.0)});
    const double e = std::exp(1.0);
    return {ode, zoo::h_family(mu), std::nullopt, {e, e * mu}};
  }
  if (id == "double-exp-equation") {
    DoubleExpFamily fam;
    fam.c = detail::field_or(spec, "c", fam.c, where);
    fam.s = detail::field_or(spec, "s", fam.s, where);
    fam.theta0 = detail::field_or(spec, "theta0", fam.theta0, where);
    fam.a1_scale = detail::field_or(spec, "a1_scale", 0.0, where);
    if (spec.contains("a1_coeffs")) {
      fam.a1_polynomial.clear();
      const json& arr = spec.at("a1_coeffs");
      for (std::size_t i = 0; i < arr.size(); ++i)
        fam.a1_polynomial.push_back(detail::parse_complex(arr[i], where + ".a1_coeffs[" + std::to_string(i) + "]"));
    }
    try {
      auto e = double_exp_equation(fam);
      return {e.ode, std::nullopt, e.solution, e.seed};
    } catch (const std::invalid_argument& x) {
      throw ConfigError(where + ": " + x.what());
    }
  }
  throw ConfigError(where + ": unknown zoo id '" + id + "'");
}

// --------------------------------------------------------------------------
// Scenarios and reports.

struct GridSpec {
  int first = 4;  // r_i = 1 - 2^{-i/4}
  int last = 60;
  std::vector<double> explicit_radii;

  std::vector<double> radii() const { return explicit_radii.empty() ? default_grid(first, last) : explicit_radii; }
};

struct Scenario {
  std::string id;
  std::string kind;
  Sector sector{0.0, kPi};
  double epsilon = kPi / 8;
  int p = 1, q = 1;
  GridSpec grid;
  double tol = 0.1;
  json params = json::object();
};

enum class ScenarioStatus { pass, fail, inconclusive };

inline std::string_view to_string(ScenarioStatus s) {
  switch (s) {
    case ScenarioStatus::pass: return "pass";
    case ScenarioStatus::fail: return "fail";
    case ScenarioStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ScenarioReport {
  std::string id;
  std::string kind;
  ScenarioStatus status = ScenarioStatus::inconclusive;
  std::string stage;    // last stage entered (the failing one when inconclusive)
  std::string message;  // error text, if any
  json measured = json::object();
  std::vector<Inequality> hypotheses;
  std::vector<Inequality> checks;
  std::vector<std::string> artifacts;
  double seconds = 0.0;

  bool all_checks_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const Inequality& i) { return i.holds; });
  }
};

inline json to_json(const ScenarioReport& r) {
  json j;
  j["id"] = r.id;
  j["kind"] = r.kind;
  j["status"] = std::string(to_string(r.status));
  j["stage"] = r.stage;
  j["message"] = r.message;
  j["measured"] = r.measured;
  j["hypotheses"] = json::array();
  for (const auto& h : r.hypotheses) j["hypotheses"].push_back(to_json(h));
  j["checks"] = json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  j["artifacts"] = r.artifacts;
  j["seconds"] = r.seconds;
  return j;
}

// --------------------------------------------------------------------------
// Plot data.

/// CSV (r, ratio, running_extremum): the extremum is taken over all samples
/// at or beyond r (sup for limsup estimates, inf for liminf), the finite
/// analogue of the limit being estimated.
inline void emit_plot_data(const OrderEstimate& e, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "r,ratio,running_extremum\n";
  os.precision(17);
  std::vector<double> run(e.ratios.size());
  for (std::size_t i = e.ratios.size(); i-- > 0;) {
    const double v = e.ratios[i];
    if (i + 1 == e.ratios.size())
      run[i] = v;
    else
      run[i] = e.mode == EstimateMode::limsup ? std::max(v, run[i + 1]) : std::min(v, run[i + 1]);
  }
  for (std::size_t i = 0; i < e.ratios.size(); ++i) os << e.r[i] << ',' << e.ratios[i] << ',' << run[i] << '\n';
  if (!os) throw std::runtime_error("write failed for " + path);
}

inline void emit_plot_data(const GrowthCurve& c, const std::string& path) { write_curve_csv(path, c); }

// --------------------------------------------------------------------------
// Recipes.

struct RunContext {
  std::string out_dir;  // empty: no artifacts

  std::string artifact(ScenarioReport& rep, const std::string& name) const {
    if (out_dir.empty()) return {};
    const auto dir = std::filesystem::path(out_dir) / rep.id;
    std::filesystem::create_directories(dir);
    const auto p = (dir / name).string();
    rep.artifacts.push_back((std::filesystem::path(rep.id) / name).string());
    return p;
  }
};

using Recipe = std::function<void(const Scenario&, ScenarioReport&, const RunContext&)>;

namespace recipes {

inline json estimate_json(const OrderEstimate& e) { return to_json(e); }

inline double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

/// Remark 1.1(b): for h, rho = mu - 1 from T and rho_M = mu from M.
inline void max_modulus_gap(const Scenario& sc, ScenarioReport& rep, const RunContext& ctx) {
  const double mu = detail::field_or(sc.params, "mu", 2.0, sc.id + ".params");
  const double tol_m = detail::field_or(sc.params, "tol_rho_m", 0.05, sc.id + ".params");
  const double tol_t = detail::field_or(sc.params, "tol_rho", 0.1, sc.id + ".params");
  if (!(mu > 1.0)) throw ConfigError(sc.id + ".params.mu: needs mu > 1");
  const auto h = zoo::h_family(mu);
  const auto grid = sc.grid.radii();
  const auto disc = Sector::full_disc();
  rep.stage = "max-modulus curve";
  const auto m = build_curve(h, CurveKind::max_modulus, disc, grid);
  rep.stage = "characteristic curve";
  const auto t = build_curve(h, CurveKind::nevanlinna_T, disc, grid);
  rep.stage = "estimation";
  const auto rho_m = pq_order_from_max_modulus(m, 1, 1, EstimateMode::limsup);
  const auto rho = pq_order(t, 1, 1, EstimateMode::limsup);
  rep.measured["mu"] = mu;
  rep.measured["r_max"] = grid.back();
  rep.measured["rho_M"] = estimate_json(rho_m);
  rep.measured["rho"] = estimate_json(rho);
  rep.checks.push_back(check_eq("rho_M(h) == mu", "Remark 1.1(b)", rho_m.value, mu, tol_m));
  rep.checks.push_back(check_eq("rho(h) == mu - 1", "Remark 1.1(b)", rho.value, mu - 1.0, tol_t));
  rep.checks.push_back(check_le("rho(h) <= rho_M(h)", "Proposition 1.1(i)", rho.value, rho_m.value, sc.tol));
  if (auto p = ctx.artifact(rep, "rho_M_ratios.csv"); !p.empty()) emit_plot_data(rho_m, p);
  if (auto p = ctx.artifact(rep, "rho_ratios.csv"); !p.empty()) emit_plot_data(rho, p);
  if (auto p = ctx.artifact(rep, "T_curve.csv"); !p.empty()) emit_plot_data(t, p);
}

/// T0 of the identity against ((beta - alpha)/4pi) log(1 + r^2); additivity
/// of S over adjacent sectors; the area route as a second opinion.
inline void identity_oracle(const Scenario& sc, ScenarioReport& rep, const RunContext& ctx) {
  const double rel = detail::field_or(sc.params, "rel_tol", 1e-6, sc.id + ".params");
  std::vector<std::pair<double, double>> sectors{{0.0, kPi}, {kPi / 4, 3 * kPi / 4}, {0.0, 3 * kPi / 2}};
  if (sc.params.contains("sectors")) {
    sectors.clear();
    for (const auto& s : sc.params.at("sectors")) sectors.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
  }
  std::vector<double> radii;
  for (int i = 1; i <= 10; ++i) radii.push_back(0.095 * i);
  const auto id = zoo::identity();
  rep.stage = "identity T0";
  double worst = 0.0, worst_area = 0.0;
  GrowthCurve first;
  for (const auto& [a, b] : sectors) {
    const Sector s(a, b);
    for (double r : radii) {
      const double exact = (b - a) / (4 * kPi) * std::log1p(r * r);
      const double v = ahlfors_shimizu_t0(id, r, s);
      worst = std::max(worst, std::abs(v - exact) / exact);
      CharacteristicOptions area;
      area.t0_method = T0Method::area;
      worst_area = std::max(worst_area, std::abs(ahlfors_shimizu_t0(id, r, s, area) - exact) / exact);
    }
  }
  rep.measured["max_rel_error_boundary"] = worst;
  rep.measured["max_rel_error_area"] = worst_area;
  rep.checks.push_back(check_le("T0(r, Omega, z) relative error (boundary route)", "T0 closed form", worst, rel, 0.0));
  rep.checks.push_back(check_le("T0(r, Omega, z) relative error (area route)", "T0 closed form", worst_area, rel, 0.0));

  rep.stage = "S additivity";
  double worst_add = 0.0;
  for (const auto& fs : std::vector<AnalyticMap>{zoo::exponential(), zoo::h_family(1.5), zoo::identity()}) {
    for (double r : {0.3, 0.6, 0.9}) {
      const double whole = spherical_area_boundary(fs, r, Sector(0.0, kPi));
      const double parts = spherical_area_boundary(fs, r, Sector(0.0, kPi / 3)) +
                           spherical_area_boundary(fs, r, Sector(kPi / 3, kPi));
      worst_add = std::max(worst_add, std::abs(whole - parts) / std::max(1e-300, std::abs(whole)));
    }
  }
  rep.measured["max_rel_additivity_gap"] = worst_add;
  rep.checks.push_back(check_le("S(r, (0,pi/3)) + S(r, (pi/3,pi)) == S(r, (0,pi))", "additivity of S", worst_add,
                                1e-7, 0.0));

  if (auto p = ctx.artifact(rep, "identity_T0.csv"); !p.empty()) {
    const Sector s(sectors.front().first, sectors.front().second);
    std::vector<double> g;
    for (int i = 1; i <= 20; ++i) g.push_back(0.0475 * i);
    emit_plot_data(build_curve(id, CurveKind::ahlfors_shimizu_T0, s, g), p);
  }
}

/// Round trip, Lemma 3.1 inclusions, derivative jets against finite differences.
inline void map_checks(const Scenario& sc, ScenarioReport& rep, const RunContext&) {
  const auto seed = detail::field_or<std::uint64_t>(sc.params, "seed", 20240611, sc.id + ".params");
  const auto n = detail::field_or<std::size_t>(sc.params, "points", 1000, sc.id + ".params");
  const Sector& s = sc.sector;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.0, 1.0), ang(0.0, kTwoPi);
  auto random_u = [&](double rmax) { return std::polar(rmax * std::sqrt(rad(rng)), ang(rng)); };

  rep.stage = "round trip";
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx u = random_u(0.95);
    worst = std::max(worst, std::abs(map_to_disc(s, map_to_sector(s, u)) - u));
  }
  rep.measured["round_trip_max_error"] = worst;
  rep.checks.push_back(check_le("|u(z(u)) - u| on |u| <= 0.95", "Lemma 3.1", worst, 1e-10, 0.0));

  rep.stage = "inclusions";
  for (double r : {0.7, 0.9}) {
    const auto inc = check_inclusions(s, sc.epsilon, r, 10000);
    const std::string tag = "r=" + std::to_string(r).substr(0, 3);
    rep.measured["inclusion_" + tag] = {{"max_abs_u", inc.max_abs_u},
                                        {"bound", inc.forward_bound},
                                        {"forward_violations", inc.forward_violations},
                                        {"reverse_violations", inc.reverse_violations},
                                        {"worst_reverse_margin", inc.worst_reverse_margin}};
    rep.checks.push_back(check_le("forward inclusion violations, " + tag, "Lemma 3.1",
                                  static_cast<double>(inc.forward_violations), 0.0, 0.0));
    rep.checks.push_back(check_le("reverse inclusion violations, " + tag, "Lemma 3.1",
                                  static_cast<double>(inc.reverse_violations), 0.0, 0.0));
    rep.checks.push_back(check_le("max |u| < 1 - b(1-r), " + tag, "Lemma 3.1", inc.max_abs_u,
                                  std::nextafter(inc.forward_bound, 0.0), 0.0));
  }

  rep.stage = "derivative jets";
  double fd = 0.0, vz = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx u = random_u(0.9);
    const auto jet = map_jet(s, u, 2);
    const double h = 1e-6;
    const cplx d = (map_to_sector(s, u + h) - map_to_sector(s, u - h)) / (2 * h);
    fd = std::max(fd, std::abs(d - jet.z_derivs[1]) / std::abs(jet.z_derivs[1]));
    vz = std::max(vz, std::abs(jet.v_derivs[0] * jet.z_derivs[1] - 1.0));
  }
  rep.measured["max_rel_fd_gap"] = fd;
  rep.measured["max_V_zprime_gap"] = vz;
  rep.checks.push_back(check_le("z'(u) vs central difference", "inverse map", fd, 1e-7, 0.0));
  rep.checks.push_back(check_le("V(u) z'(u) == 1", "Lemma 3.3", vz, 1e-12, 0.0));
}

/// Full-disc T0 of the pullback F = f o z on a radius list.
inline std::vector<double> disc_t0(const AnalyticMap& F, const std::vector<double>& radii) {
  std::vector<double> out;
  for (double r : radii) out.push_back(ahlfors_shimizu_t0(F, r, Sector::full_disc()));
  return out;
}

/// Lemma 3.2: both transfer inequalities after additive calibration at r = 0.5.
inline void characteristic_transfer(const Scenario& sc, ScenarioReport& rep, const RunContext& ctx) {
  const Sector& s = sc.sector;
  const double d = s.delta();
  const double b = shrink_constant(s, sc.epsilon).b;
  const Sector se = shrink(s, sc.epsilon).effective();
  const double r_cal = detail::field_or(sc.params, "calibration_radius", 0.5, sc.id + ".params");
  const double r_lo = detail::field_or(sc.params, "r_min", 0.55, sc.id + ".params");
  const double r_hi = detail::field_or(sc.params, "r_max", 0.995, sc.id + ".params");
  const int n = detail::field_or(sc.params, "points", 24, sc.id + ".params");
  std::vector<double> radii{r_cal};
  for (int i = 0; i < n; ++i) radii.push_back(r_lo + (r_hi - r_lo) * i / (n - 1.0));
  const json& fns = sc.params.at("functions");
  json per = json::array();
  for (std::size_t fi = 0; fi < fns.size(); ++fi) {
    const auto f = zoo_function(fns[fi], sc.id + ".params.functions[" + std::to_string(fi) + "]");
    const auto F = pullback(f, s);
    const std::string label = zoo_label(fns[fi]);
    rep.stage = "transfer curves for " + label;
    // First inequality: T0(rho, C, F) <= (16 pi / delta) T0(1 - delta (1 - rho)/(8 pi), Omega, f) + O(1).
    std::vector<double> lhs3 = disc_t0(F, radii), rhs3, lhs4, rhs4;
    for (double r : radii) rhs3.push_back(16 * kPi / d * ahlfors_shimizu_t0(f, 1.0 - d * (1.0 - r) / (8 * kPi), s));
    // Second: T0(r, Omega_eps, f) <= (2 / b) T0(1 - b (1 - r), C, F) + O(1).
    for (double r : radii) {
      lhs4.push_back(ahlfors_shimizu_t0(f, r, se));
      rhs4.push_back(2.0 / b * ahlfors_shimizu_t0(F, 1.0 - b * (1.0 - r), Sector::full_disc()));
    }
    auto verdict = [&](const std::vector<double>& l, const std::vector<double>& rr) {
      const double c = l[0] - rr[0];  // calibration constant at r_cal
      std::size_t viol = 0;
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < l.size(); ++i) {
        const double margin = rr[i] + c - l[i];
        worst = std::min(worst, margin);
        if (margin < 0.0) ++viol;
      }
      return std::make_tuple(c, viol, worst);
    };
    const auto [c3, v3, w3] = verdict(lhs3, rhs3);
    const auto [c4, v4, w4] = verdict(lhs4, rhs4);
    per.push_back({{"function", label},
                   {"calibration_disc_to_sector", c3},
                   {"violations_disc_to_sector", v3},
                   {"worst_margin_disc_to_sector", w3},
                   {"calibration_sector_to_disc", c4},
                   {"violations_sector_to_disc", v4},
                   {"worst_margin_sector_to_disc", w4}});
    rep.checks.push_back(check_le("violations of T0(rho,C,F) <= (16pi/delta) T0(.., Omega, f) + C, " + label,
                                  "Lemma 3.2", static_cast<double>(v3), 0.0, 0.0));
    rep.checks.push_back(check_le("violations of T0(r,Omega_eps,f) <= (2/b) T0(.., C, F) + C, " + label, "Lemma 3.2",
                                  static_cast<double>(v4), 0.0, 0.0));
    if (auto p = ctx.artifact(rep, "transfer_" + std::to_string(fi) + ".csv"); !p.empty()) {
      std::ofstream os(p);
      os.precision(17);
      os << "r,lhs_disc,rhs_disc,lhs_sector,rhs_sector\n";
      for (std::size_t i = 0; i < radii.size(); ++i)
        os << radii[i] << ',' << lhs3[i] << ',' << rhs3[i] + c3 << ',' << lhs4[i] << ',' << rhs4[i] + c4 << '\n';
    }
  }
  rep.measured["b"] = b;
  rep.measured["functions"] = per;
}

/// Lemma 3.3/3.4: chain rule both ways, conjugacy residual of F = f o z.
inline void conjugacy(const Scenario& sc, ScenarioReport& rep, const RunContext&) {
  const Sector& s = sc.sector;
  const auto seed = growthlab::detail::field_or<std::uint64_t>(sc.params, "seed", 7, sc.id + ".params");
  const auto n = growthlab::detail::field_or<std::size_t>(sc.params, "points", 200, sc.id + ".params");
  const double rmax = growthlab::detail::field_or(sc.params, "u_radius", 0.9, sc.id + ".params");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.0, 1.0), ang(0.0, kTwoPi);
  std::vector<cplx> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(std::polar(rmax * std::sqrt(rad(rng)), ang(rng)));

  json eqs = json::array();
  const json& list = sc.params.at("equations");
  for (std::size_t ei = 0; ei < list.size(); ++ei) {
    const auto eq = zoo_equation(list[ei], sc.id + ".params.equations[" + std::to_string(ei) + "]");
    const std::string label = zoo_label(list[ei]);
    if (!eq.solution) throw ConfigError(sc.id + ": equation " + label + " has no explicit solution");
    rep.stage = "conjugacy for " + label;
    const auto t = transform_to_disc(*eq.ode, s);
    const std::size_t k = t.order();
    double worst_res = 0.0, worst_b0 = 0.0;
    for (cplx u : pts) {
      const Jet F = eq.solution->series(map_series(s, Jet::variable(u, k)));
      std::vector<cplx> jet;
      for (std::size_t j = 0; j <= k; ++j) jet.push_back(F.derivative(j));
      worst_res = std::max(worst_res, residual(t, u, jet));
      const auto b = t.coefficient_values(u);
      const cplx a0 = eq.ode->coefficient_values(map_to_sector(s, u))[0];
      const cplx akk = t.table().evaluate(u)[k][k];
      worst_b0 = std::max(worst_b0, std::abs(b[0] * akk - a0) / std::max(1.0, std::abs(a0)));
    }
    eqs.push_back({{"equation", label}, {"max_residual", worst_res}, {"max_B0_gap", worst_b0}});
    rep.checks.push_back(check_le("transformed-equation residual of f o z, " + label, "Lemma 3.4", worst_res, 1e-6, 0.0));
    rep.checks.push_back(check_le("B_0 alpha[k][k] == A_0 o z, " + label, "Lemma 3.4", worst_b0, 1e-10, 0.0));
  }
  rep.measured["equations"] = eqs;

  rep.stage = "chain rule";
  const std::size_t ell = growthlab::detail::field_or<std::size_t>(sc.params, "chain_order", 4, sc.id + ".params");
  const auto table = chain_rule_table(s, ell);
  double worst_chain = 0.0, worst_diag = 0.0;
  json fl = json::array();
  const json& fns = sc.params.at("functions");
  for (std::size_t fi = 0; fi < fns.size(); ++fi) {
    const auto f = zoo_function(fns[fi], sc.id + ".params.functions[" + std::to_string(fi) + "]");
    double worst_f = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(pts.size(), 50); ++i) {
      const cplx u = pts[i];
      const cplx z = map_to_sector(s, u);
      const Jet direct = f.series(Jet::variable(z, ell));
      const Jet F = f.series(map_series(s, Jet::variable(u, ell)));
      const auto al = table.evaluate(u);
      for (std::size_t l = 1; l <= ell; ++l) {
        cplx sum{0.0};
        double scale = 0.0;
        for (std::size_t j = 1; j <= l; ++j) {
          const cplx term = al[l][j] * F.derivative(j);
          sum += term;
          scale = std::max(scale, std::abs(term));
        }
        const cplx want = direct.derivative(l);
        scale = std::max(scale, std::abs(want));
        if (scale > 0.0) worst_f = std::max(worst_f, std::abs(sum - want) / scale);
      }
      const cplx v = reciprocal_derivative_series(s, u, 0)[0];
      for (std::size_t l = 1; l <= ell; ++l)
        worst_diag = std::max(worst_diag, std::abs(al[l][l] - std::pow(v, static_cast<double>(l))) /
                                              std::abs(std::pow(v, static_cast<double>(l))));
    }
    worst_chain = std::max(worst_chain, worst_f);
    fl.push_back({{"function", zoo_label(fns[fi])}, {"max_rel_gap", worst_f}});
  }
  rep.measured["chain_rule"] = fl;
  rep.measured["chain_rule_diagonal_gap"] = worst_diag;
  rep.checks.push_back(check_le("f^(l)(z(u)) == sum_j alpha[l][j] F^(j)(u), l <= " + std::to_string(ell), "Lemma 3.3",
                                worst_chain, 1e-8, 0.0));
  rep.checks.push_back(check_le("alpha[l][l] == V^l", "Lemma 3.4", worst_diag, 1e-12, 0.0));

  rep.stage = "chain-rule coefficient growth";
  // T(rho, alpha[n][j]) = O(log 1/(1-rho)): never admissible.
  const auto t2 = chain_rule_table(s, 2);
  json growth = json::array();
  for (auto [nn, jj] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 1}, {2, 2}}) {
    auto entry = AnalyticMap::from_value("alpha", [t2, nn, jj](const Jet& u) {
      return compose_at_offset(t2.series(u.value(), u.order())[nn][jj], u);
    });
    const auto curve = build_curve(entry, CurveKind::nevanlinna_T, Sector::full_disc(), default_grid(4, 48));
    const auto cls = classify_growth(curve);
    growth.push_back({{"entry", "alpha[" + std::to_string(nn) + "][" + std::to_string(jj) + "]"},
                      {"class", std::string(to_string(cls.cls))},
                      {"ratios_T_over_log", cls.ratios}});
    rep.checks.push_back(check_le("alpha[" + std::to_string(nn) + "][" + std::to_string(jj) + "] is not admissible",
                                  "Lemma 3.3", cls.cls == GrowthClass::admissible ? 1.0 : 0.0, 0.0, 0.0));
  }
  rep.measured["alpha_growth"] = growth;
}

/// Propositions 1.1/1.2 for each function and (p, q).
inline void order_chains(const Scenario& sc, ScenarioReport& rep, const RunContext& ctx) {
  const auto grid = sc.grid.radii();
  const auto disc = Sector::full_disc();
  std::vector<std::pair<int, int>> pqs{{1, 1}, {2, 1}};
  if (sc.params.contains("pq")) {
    pqs.clear();
    for (const auto& v : sc.params.at("pq")) pqs.emplace_back(v.at(0).get<int>(), v.at(1).get<int>());
  }
  json out = json::array();
  const json& fns = sc.params.at("functions");
  for (std::size_t fi = 0; fi < fns.size(); ++fi) {
    const auto f = zoo_function(fns[fi], sc.id + ".params.functions[" + std::to_string(fi) + "]");
    const std::string label = zoo_label(fns[fi]);
    rep.stage = "curves for " + label;
    const auto t = build_curve(f, CurveKind::nevanlinna_T, disc, grid);
    const auto m = build_curve(f, CurveKind::max_modulus, disc, grid);
    for (auto [p, q] : pqs) {
      rep.stage = "chains for " + label;
      const auto pr = verify_proposition_pair(t, m, p, q, sc.tol);
      json e{{"function", label}, {"p", p}, {"q", q}, {"rho", to_json(pr.rho)}, {"rho_M", to_json(pr.rho_m)},
             {"mu", to_json(pr.mu)}, {"mu_M", to_json(pr.mu_m)}};
      out.push_back(std::move(e));
      for (auto ineq : pr.inequalities) {
        ineq.name += ", " + label;
        rep.checks.push_back(std::move(ineq));
      }
      rep.checks.push_back(check_le("mu <= rho [" + std::to_string(p) + "," + std::to_string(q) + "], " + label,
                                    "lower order <= order", pr.mu.value, pr.rho.value, 0.0));
    }
    if (auto p = ctx.artifact(rep, "T_" + std::to_string(fi) + ".csv"); !p.empty()) emit_plot_data(t, p);
  }
  rep.measured["estimates"] = out;
}

/// Lemma 3.7 as a diagnostic: m(r, f^(k)/f) / (log^+ T(r,f) + log 1/(1-r)) stays bounded.
inline void log_derivative_proximity_check(const Scenario& sc, ScenarioReport& rep, const RunContext& ctx) {
  const double bound = growthlab::detail::field_or(sc.params, "ratio_bound", 10.0, sc.id + ".params");
  const double slope_cap = growthlab::detail::field_or(sc.params, "slope_cap", 0.05, sc.id + ".params");
  const auto grid = sc.grid.radii();
  json out = json::array();
  const json& fns = sc.params.at("functions");
  for (std::size_t fi = 0; fi < fns.size(); ++fi) {
    const auto f = zoo_function(fns[fi], sc.id + ".params.functions[" + std::to_string(fi) + "]");
    const std::string label = zoo_label(fns[fi]);
    for (std::size_t k : {std::size_t{1}, std::size_t{2}}) {
      rep.stage = "proximity for " + label + ", k=" + std::to_string(k);
      std::vector<double> ratio, xs;
      double top = 0.0;
      for (double r : grid) {
        const double mk = log_derivative_proximity(f, k, r);
        const double L = std::log(1.0 / (1.0 - r));
        const double den = iterated_log_plus(1, nevanlinna_t(f, r)) + L;
        ratio.push_back(mk / den);
        xs.push_back(L);
        top = std::max(top, ratio.back());
      }
      const std::size_t h = ratio.size() / 2;
      const auto fit = growthlab::detail::least_squares({xs.begin() + static_cast<std::ptrdiff_t>(h), xs.end()},
                                                        {ratio.begin() + static_cast<std::ptrdiff_t>(h), ratio.end()});
      out.push_back({{"function", label}, {"k", k}, {"max_ratio", top}, {"tail_slope", fit.b}, {"ratios", ratio}});
      const std::string tag = label + ", k=" + std::to_string(k);
      rep.checks.push_back(check_le("m(r, f^(k)/f) / (log+ T + log 1/(1-r)) bounded, " + tag, "Lemma 3.7", top, bound,
                                    0.0));
      rep.checks.push_back(check_le("tail slope of that ratio against log 1/(1-r), " + tag, "Lemma 3.7", fit.b,
                                    slope_cap, 0.0));
      if (auto p = ctx.artifact(rep, "proximity_" + std::to_string(fi) + "_k" + std::to_string(k) + ".csv");
          !p.empty()) {
        std::ofstream os(p);
        os.precision(17);
        os << "r,ratio\n";
        for (std::size_t i = 0; i < grid.size(); ++i) os << grid[i] << ',' << ratio[i] << '\n';
      }
    }
  }
  rep.measured["functions"] = out;
}

/// Remark 3.1: Omega_eps order <= disc order of f o z <= Omega order.
inline void sector_sandwich(const Scenario& sc, ScenarioReport& rep, const RunContext&) {
  const auto f = zoo_function(sc.params.at("function"), sc.id + ".params.function");
  const Sector& s = sc.sector;
  const Sector se = shrink(s, sc.epsilon).effective();
  const auto grid = sc.grid.radii();
  rep.stage = "sector curves";
  const auto to = build_curve(f, CurveKind::ahlfors_shimizu_T0, s, grid);
  const auto te = build_curve(f, CurveKind::ahlfors_shimizu_T0, se, grid);
  rep.stage = "disc curve of f o z";
  const auto F = pullback(f, s);
  const auto tf = build_curve(F, CurveKind::nevanlinna_T, Sector::full_disc(), grid);
  rep.stage = "estimation";
  const double tol = growthlab::detail::field_or(sc.params, "tol", 0.15, sc.id + ".params");
  for (auto mode : {EstimateMode::limsup, EstimateMode::liminf}) {
    const auto a = pq_order(te, sc.p, sc.q, mode), b = pq_order(tf, sc.p, sc.q, mode), c = pq_order(to, sc.p, sc.q, mode);
    const std::string nm = mode == EstimateMode::limsup ? "rho" : "mu";
    rep.measured[nm + "_Omega_eps"] = to_json(a);
    rep.measured[nm + "_disc"] = to_json(b);
    rep.measured[nm + "_Omega"] = to_json(c);
    rep.checks.push_back(check_le(nm + "_Omega_eps(f) <= " + nm + "(f o z)", "Remark 3.1", a.value, b.value, tol));
    rep.checks.push_back(check_le(nm + "(f o z) <= " + nm + "_Omega(f)", "Remark 3.1", b.value, c.value, tol));
  }
}

/// Criterion-level solver checks: exact polynomial and sine, the h-equation at
/// r = 0.99, fixed-step convergence, and the solution map against h.
inline void ray_solver(const Scenario& sc, ScenarioReport& rep, const RunContext&) {
  rep.stage = "polynomial solution";
  {
    LinearOde zero({zoo::constant(0.0), zoo::constant(0.0)});
    const auto sol = solve_ray(zero, 0.7, 0.0, 0.95, {1.0, 2.0});
    const cplx z = std::polar(0.95, 0.7);
    const auto& smp = sol.samples.back();
    const cplx f = smp.state[0] * std::exp(smp.log_scale);
    const double err = std::abs(f - (1.0 + 2.0 * z)) / std::abs(1.0 + 2.0 * z);
    rep.measured["polynomial_rel_error"] = err;
    rep.checks.push_back(check_le("f'' = 0 reproduces 1 + 2z", "exact solution", err, 1e-12, 0.0));
  }
  rep.stage = "sine";
  {
    LinearOde sine({zoo::constant(1.0), zoo::constant(0.0)});
    const auto sol = solve_ray(sine, 0.0, 0.0, 0.9, {0.0, 1.0});
    const auto& smp = sol.samples.back();
    const double err = std::abs(smp.state[0] * std::exp(smp.log_scale) - std::sin(0.9));
    rep.measured["sine_abs_error"] = err;
    rep.checks.push_back(check_le("f'' + f = 0 reproduces sin r at 0.9", "exact solution", err, 1e-10, 0.0));
  }
  const double r_end = growthlab::detail::field_or(sc.params, "r_end", 0.99, sc.id + ".params");
  json hs = json::array();
  for (double mu : sc.params.value("mu", std::vector<double>{1.5, 2.0})) {
    rep.stage = "h-equation mu=" + std::to_string(mu);
    const auto eq = zoo_equation({{"zoo", "h-equation"}, {"mu", mu}});
    const auto sol = solve_ray(*eq.ode, 0.0, 0.0, r_end, eq.seed);
    const double exact = std::pow(1.0 - r_end, -mu);
    const double got = sol.samples.back().log_abs();
    const double rel = std::abs(got - exact) / exact;
    hs.push_back({{"mu", mu}, {"log_h_exact", exact}, {"log_h_solver", got}, {"rel_error", rel}, {"steps", sol.steps},
                  {"rejected", sol.rejected}, {"max_residual", sol.max_residual}});
    rep.checks.push_back(check_le("log h(" + std::to_string(r_end).substr(0, 4) + ") relative error, mu=" +
                                      std::to_string(mu).substr(0, 3),
                                  "explicit solution h", rel, 1e-6, 0.0));
    rep.checks.push_back(check_le("max accepted-step residual, mu=" + std::to_string(mu).substr(0, 3),
                                  "step acceptance", sol.max_residual, SolverOptions{}.residual_tol, 0.0));
  }
  rep.measured["h_equation"] = hs;

  rep.stage = "convergence order";
  {
    const double coarse = growthlab::detail::field_or(sc.params, "coarse_step", 0.05, sc.id + ".params");
    const auto eq = zoo_equation({{"zoo", "h-equation"}, {"mu", 1.5}});
    SolverOptions o;
    o.series_order = 12;
    auto max_res = [&](double h) {
      o.fixed_step = h;
      return solve_ray(*eq.ode, 0.0, 0.0, 0.6, eq.seed, o).max_residual;
    };
    const double r1 = max_res(coarse), r2 = max_res(coarse / 2);
    rep.measured["fixed_step_residuals"] = {r1, r2};
    rep.checks.push_back(check_le("residual drop on step halving >= 2^8", "high-order convergence", 256.0, r1 / r2, 0.0));
  }

  rep.stage = "solution map";
  {
    const double mu = 1.5;
    const auto eq = zoo_equation({{"zoo", "h-equation"}, {"mu", mu}});
    // Beyond r ~ 0.94 the rays where h is small lose it to the growing second
    // solution, so the comparison stops there.
    const auto grid = default_grid(4, 16);
    SolutionMapOptions mo;
    mo.r_max = grid.back();
    mo.output_radii = grid;
    const auto fmap = solution_as_analytic_map(eq.ode, eq.seed, mo, "h-solution");
    const auto num = build_curve(fmap, CurveKind::nevanlinna_T, Sector::full_disc(), grid);
    const auto ref = build_curve(zoo::h_family(mu), CurveKind::nevanlinna_T, Sector::full_disc(), grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::abs(num.value[i] - ref.value[i]) / std::max(1e-300, std::abs(ref.value[i])));
    rep.measured["solution_map_T_rel_error"] = worst;
    rep.checks.push_back(check_le("T-curve of the solved h vs closed form, r <= 0.9375", "explicit solution h", worst,
                                  0.01, 0.0));
    const cplx z = std::polar(0.5, 1.0);
    const auto a = fmap.sample(z), b = fmap.sample(z);
    rep.checks.push_back(check_le("repeat samples are bit-identical", "cache determinism",
                                  (a.log_abs == b.log_abs && a.dlog == b.dlog) ? 0.0 : 1.0, 0.0, 0.0));
  }
}

/// Shared recipe for the dominant-coefficient theorems.
enum class DominantVariant { lower_order, regular, lower_type };

inline void dominant_coefficient(const Scenario& sc, ScenarioReport& rep, const RunContext& ctx, DominantVariant v) {
  const auto eq = zoo_equation(sc.params.at("equation"), sc.id + ".params.equation");
  if (!eq.loglog_solution) throw ConfigError(sc.id + ": dominant-coefficient scenarios need the double-exp-equation");
  const Sector& s = sc.sector;
  const Sector se = shrink(s, sc.epsilon).effective();
  const int p = sc.p, q = sc.q;
  if (p != 1 || q != 1) throw ConfigError(sc.id + ": only (p, q) = (1, 1) is implemented for these equations");
  const double tol = growthlab::detail::field_or(sc.params, "tol", 0.15, sc.id + ".params");
  const auto grid = sc.grid.radii();
  const auto& coeffs = eq.ode->coefficients();
  const auto pqs = "[" + std::to_string(p) + "," + std::to_string(q) + "]";
  const auto pq1 = "[" + std::to_string(p + 1) + "," + std::to_string(q) + "]";

  // (a) coefficient curves.
  rep.stage = "coefficient curves";
  const auto a0_o = build_curve(coeffs[0], CurveKind::ahlfors_shimizu_T0, s, grid);
  const auto a0_e = build_curve(coeffs[0], CurveKind::ahlfors_shimizu_T0, se, grid);
  std::vector<GrowthCurve> aj_o;
  for (std::size_t j = 1; j < coeffs.size(); ++j)
    aj_o.push_back(build_curve(coeffs[j], CurveKind::ahlfors_shimizu_T0, s, grid));
  rep.stage = "coefficient estimates";
  const auto mu_a0_e = pq_order(a0_e, p, q, EstimateMode::liminf);
  const auto rho_a0_e = pq_order(a0_e, p, q, EstimateMode::limsup);
  const auto mu_a0_o = pq_order(a0_o, p, q, EstimateMode::liminf);
  double rho_aj = 0.0;
  json aj = json::array();
  std::vector<OrderEstimate> rho_aj_each;
  for (const auto& c : aj_o) {
    rho_aj_each.push_back(pq_order(c, p, q, EstimateMode::limsup));
    rho_aj = std::max(rho_aj, rho_aj_each.back().value);
    aj.push_back(to_json(rho_aj_each.back()));
  }
  rep.measured["mu_Omega_eps(A_0)"] = to_json(mu_a0_e);
  rep.measured["rho_Omega_eps(A_0)"] = to_json(rho_a0_e);
  rep.measured["mu_Omega(A_0)"] = to_json(mu_a0_o);
  rep.measured["rho_Omega(A_j), j>=1"] = aj;
  if (auto path = ctx.artifact(rep, "A0_T0_Omega_eps.csv"); !path.empty()) emit_plot_data(a0_e, path);

  // (b) hypotheses.
  rep.stage = "hypotheses";
  if (v == DominantVariant::lower_type) {
    rep.hypotheses.push_back(check_le("0 < mu_Omega_eps(A_0)", "Theorem 2.2", 0.0, mu_a0_e.value - 0.05, 0.0));
    rep.hypotheses.push_back(check_le("rho_Omega_eps(A_0) < inf", "Theorem 2.2", rho_a0_e.infinite_flag ? 1.0 : 0.0,
                                      0.0, 0.0));
    rep.hypotheses.push_back(
        check_le("max rho_Omega(A_j) <= mu_Omega_eps(A_0)", "Theorem 2.2", rho_aj, mu_a0_e.value, sc.tol));
    // Types at the common order mu_Omega_eps(A_0).
    const double order = mu_a0_e.value;
    const auto tau_bar_a0 = pq_type(a0_e, p, q, order, EstimateMode::liminf);
    double tau_aj = 0.0;
    json types = json::array();
    for (std::size_t j = 0; j < aj_o.size(); ++j) {
      if (rho_aj_each[j].value < order - sc.tol) continue;  // lower order: type irrelevant
      const auto t = pq_type(aj_o[j], p, q, order, EstimateMode::limsup);
      tau_aj = std::max(tau_aj, t.value);
      types.push_back(to_json(t));
    }
    rep.measured["lower_type_Omega_eps(A_0)"] = to_json(tau_bar_a0);
    rep.measured["type_Omega(A_j), equal order"] = types;
    const double type_gap = growthlab::detail::field_or(sc.params, "type_gap", 1.5, sc.id + ".params");
    rep.hypotheses.push_back(check_le("max tau_Omega(A_j) * " + std::to_string(type_gap).substr(0, 4) +
                                          " < lower tau_Omega_eps(A_0)",
                                      "Theorem 2.2", tau_aj * type_gap, tau_bar_a0.value, 0.0));
  } else {
    rep.hypotheses.push_back(
        check_le("max rho_Omega(A_j) < mu_Omega_eps(A_0)", "Theorem 2.1", rho_aj + sc.tol, mu_a0_e.value, 0.0));
    if (v == DominantVariant::regular)
      rep.hypotheses.push_back(check_eq("mu_Omega_eps(A_0) == rho_Omega_eps(A_0)", "Corollary 2.1", mu_a0_e.value,
                                        rho_a0_e.value, sc.tol));
  }
  const bool hyp = std::all_of(rep.hypotheses.begin(), rep.hypotheses.end(), [](const auto& h) { return h.holds; });
  if (!hyp) return;

  // (c) the solution: check the Taylor solver against the explicit solution
  // where stepping is affordable, then build T0 from the explicit form.
  rep.stage = "solver cross-check";
  const LogLogMap& fsol = *eq.loglog_solution;
  const AnalyticMap fplain = fsol.as_map();
  const double log_cap = growthlab::detail::field_or(sc.params, "cross_check_log_cap", 1e4, sc.id + ".params");
  double worst = 0.0;
  json rays = json::array();
  const int nrays = growthlab::detail::field_or(sc.params, "cross_check_rays", 9, sc.id + ".params");
  for (int i = 0; i < nrays; ++i) {
    const double th = s.alpha() + (s.beta() - s.alpha()) * i / (nrays - 1.0);
    // Largest radius on the 1 - 2^{-k/4} ladder with log|f| below the cap.
    double r_end = 0.5;
    for (double r : default_grid(4, 60)) {
      if (fplain.sample(std::polar(r, th)).log_abs > log_cap) break;
      r_end = r;
    }
    const auto sol = solve_ray(*eq.ode, th, 0.0, r_end, eq.seed);
    const auto& last = sol.samples.back();
    const auto ex = fplain.sample(std::polar(r_end, th));
    const double rel = std::abs(last.log_abs() - ex.log_abs) / std::max(1.0, std::abs(ex.log_abs));
    worst = std::max(worst, rel);
    rays.push_back({{"theta", th}, {"r_end", r_end}, {"log_abs_exact", ex.log_abs}, {"log_abs_solver", last.log_abs()},
                    {"steps", sol.steps}});
  }
  rep.measured["solver_cross_check"] = rays;
  rep.checks.push_back(check_le("solver vs explicit solution, relative log|f| error", "explicit solution", worst, 1e-8,
                                0.0));

  rep.stage = "solver-built T0 cross-check";
  {
    const std::vector<double> small{0.5, 0.55, 0.6};
    SolutionMapOptions mo;
    mo.r_max = small.back();
    mo.output_radii = small;
    const auto fnum = solution_as_analytic_map(eq.ode, eq.seed, mo, "solution");
    const auto num = build_curve(fnum, CurveKind::ahlfors_shimizu_T0, s, small);
    double gap = 0.0;
    for (std::size_t i = 0; i < small.size(); ++i) {
      const double ex = std::exp(log_ahlfors_shimizu_t0(fsol, small[i], s));
      gap = std::max(gap, std::abs(num.value[i] - ex) / ex);
    }
    rep.measured["solver_T0_rel_gap"] = gap;
    rep.checks.push_back(check_le("T0(r, Omega, f) from solved rays vs explicit, r <= 0.6", "explicit solution", gap,
                                  1e-6, 0.0));
  }

  rep.stage = "solution curves";
  const auto f_o = build_log_t0_curve(fsol, s, grid);
  const auto f_e = build_log_t0_curve(fsol, se, grid);
  if (auto path = ctx.artifact(rep, "f_logT0_Omega.csv"); !path.empty()) emit_plot_data(f_o, path);

  // (d) conclusions.
  rep.stage = "conclusions";
  const std::string thm = v == DominantVariant::lower_type ? "Theorem 2.2"
                          : v == DominantVariant::regular  ? "Corollary 2.1"
                                                           : "Theorem 2.1";
  const auto rho_f = pq_order(f_o, p, q, EstimateMode::limsup);
  const auto mu_f = pq_order(f_o, p, q, EstimateMode::liminf);
  const auto mu1_f_o = pq_order(f_o, p + 1, q, EstimateMode::liminf);
  const auto rho1_f_o = pq_order(f_o, p + 1, q, EstimateMode::limsup);
  const auto mu1_f_e = pq_order(f_e, p + 1, q, EstimateMode::liminf);
  const auto rho1_f_e = pq_order(f_e, p + 1, q, EstimateMode::limsup);
  rep.measured["rho_Omega(f)"] = to_json(rho_f);
  rep.measured["mu_Omega(f)"] = to_json(mu_f);
  rep.measured["mu" + pq1 + "_Omega(f)"] = to_json(mu1_f_o);
  rep.measured["rho" + pq1 + "_Omega(f)"] = to_json(rho1_f_o);
  rep.measured["mu" + pq1 + "_Omega_eps(f)"] = to_json(mu1_f_e);
  rep.measured["rho" + pq1 + "_Omega_eps(f)"] = to_json(rho1_f_e);
  if (auto path = ctx.artifact(rep, "mu_p1_ratios.csv"); !path.empty()) emit_plot_data(mu1_f_o, path);

  rep.checks.push_back(check_le("divergence evidence for rho" + pqs + "_Omega(f)", thm, rho_f.infinite_flag ? 0.0 : 1.0,
                                0.0, 0.0));
  rep.checks.push_back(check_le("divergence evidence for mu" + pqs + "_Omega(f)", thm, mu_f.infinite_flag ? 0.0 : 1.0,
                                0.0, 0.0));
  rep.checks.push_back(check_le("mu" + pqs + "_Omega_eps(A_0) <= mu" + pq1 + "_Omega(f)", thm, mu_a0_e.value,
                                mu1_f_o.value, tol));
  rep.checks.push_back(
      check_le("mu" + pq1 + "_Omega(f) <= rho" + pq1 + "_Omega(f)", thm, mu1_f_o.value, rho1_f_o.value, 0.0));
  const double plus = p > q ? 0.0 : 1.0;
  rep.checks.push_back(check_le("mu" + pq1 + "_Omega_eps(f) <= mu" + pqs + "_Omega(A_0) + " +
                                    std::to_string(static_cast<int>(plus)),
                                thm, mu1_f_e.value, mu_a0_o.value + plus, tol));
  if (v == DominantVariant::regular) {
    const auto rho_a0_o = pq_order(a0_o, p, q, EstimateMode::limsup);
    rep.measured["rho_Omega(A_0)"] = to_json(rho_a0_o);
    rep.checks.push_back(check_le("mu" + pq1 + "_Omega_eps(f) <= rho" + pq1 + "_Omega_eps(f)", thm, mu1_f_e.value,
                                  rho1_f_e.value, 0.0));
    rep.checks.push_back(check_le("rho" + pq1 + "_Omega_eps(f) <= mu" + pqs + "_Omega(A_0) + " +
                                      std::to_string(static_cast<int>(plus)),
                                  thm, rho1_f_e.value, mu_a0_o.value + plus, tol));
  }
}

}  // namespace recipes

inline const std::map<std::string, Recipe>& recipe_registry() {
  using recipes::DominantVariant;
  static const std::map<std::string, Recipe> reg{
      {"max-modulus-gap", recipes::max_modulus_gap},
      {"identity-oracle", recipes::identity_oracle},
      {"map-inclusions", recipes::map_checks},
      {"characteristic-transfer", recipes::characteristic_transfer},
      {"conjugacy", recipes::conjugacy},
      {"order-chains", recipes::order_chains},
      {"log-derivative-proximity", recipes::log_derivative_proximity_check},
      {"sector-sandwich", recipes::sector_sandwich},
      {"ray-solver", recipes::ray_solver},
      {"dominant-coefficient-lower-order",
       [](const Scenario& s, ScenarioReport& r, const RunContext& c) {
         recipes::dominant_coefficient(s, r, c, DominantVariant::lower_order);
       }},
      {"regular-dominant-coefficient",
       [](const Scenario& s, ScenarioReport& r, const RunContext& c) {
         recipes::dominant_coefficient(s, r, c, DominantVariant::regular);
       }},
      {"dominant-coefficient-lower-type",
       [](const Scenario& s, ScenarioReport& r, const RunContext& c) {
         recipes::dominant_coefficient(s, r, c, DominantVariant::lower_type);
       }},
  };
  return reg;
}

// --------------------------------------------------------------------------
// Parsing.

/// Validates zoo references eagerly so that typos fail before any work.
inline void validate_zoo_refs(const json& j, const std::string& where) {
  if (j.is_object()) {
    if (j.contains("zoo")) {
      const auto id = j.at("zoo").get<std::string>();
      const auto& f = zoo_function_ids();
      const auto& e = zoo_equation_ids();
      if (std::find(f.begin(), f.end(), id) == f.end() && std::find(e.begin(), e.end(), id) == e.end())
        throw ConfigError(where + ": unknown zoo id '" + id + "'");
    }
    for (auto it = j.begin(); it != j.end(); ++it) validate_zoo_refs(it.value(), where + "." + it.key());
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) validate_zoo_refs(j[i], where + "[" + std::to_string(i) + "]");
  }
}

inline Scenario parse_scenario(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": scenario must be an object");
  Scenario sc;
  sc.id = detail::require_field(j, "id", where).get<std::string>();
  sc.kind = detail::require_field(j, "kind", where).get<std::string>();
  if (!recipe_registry().count(sc.kind)) throw ConfigError(where + ".kind: unknown scenario kind '" + sc.kind + "'");
  try {
    if (j.contains("sector")) sc.sector = Sector(j.at("sector").at(0).get<double>(), j.at("sector").at(1).get<double>());
    sc.epsilon = detail::field_or(j, "epsilon", sc.epsilon, where);
    (void)shrink(sc.sector, sc.epsilon);
  } catch (const DomainError& e) {
    throw ConfigError(where + ".sector/epsilon: " + e.what());
  }
  if (j.contains("pq")) {
    sc.p = j.at("pq").at(0).get<int>();
    sc.q = j.at("pq").at(1).get<int>();
    if (!(sc.p >= sc.q && sc.q >= 1)) throw ConfigError(where + ".pq: need p >= q >= 1");
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (g.contains("radii")) {
      sc.grid.explicit_radii = g.at("radii").get<std::vector<double>>();
    } else {
      sc.grid.first = detail::field_or(g, "first", sc.grid.first, where + ".grid");
      sc.grid.last = detail::field_or(g, "last", sc.grid.last, where + ".grid");
      if (!(sc.grid.first >= 1 && sc.grid.last > sc.grid.first)) throw ConfigError(where + ".grid: need 1 <= first < last");
    }
  }
  sc.tol = detail::field_or(j, "tol", sc.tol, where);
  if (j.contains("params")) sc.params = j.at("params");
  validate_zoo_refs(sc.params, where + ".params");
  return sc;
}

struct SuiteConfig {
  std::vector<Scenario> scenarios;
  std::size_t jobs = 1;
};

inline SuiteConfig parse_suite(const json& j) {
  SuiteConfig cfg;
  const json& arr = detail::require_field(j, "scenarios", "config");
  if (!arr.is_array()) throw ConfigError("config.scenarios: must be an array");
  if (arr.empty()) throw ConfigError("config.scenarios: empty scenario list (refusing a vacuous pass)");
  std::vector<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    cfg.scenarios.push_back(parse_scenario(arr[i], "scenarios[" + std::to_string(i) + "]"));
    const auto& id = cfg.scenarios.back().id;
    if (std::find(seen.begin(), seen.end(), id) != seen.end())
      throw ConfigError("scenarios[" + std::to_string(i) + "].id: duplicate id '" + id + "'");
    seen.push_back(id);
  }
  cfg.jobs = detail::field_or<std::size_t>(j, "jobs", 1, "config");
  return cfg;
}

inline SuiteConfig load_suite(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(is, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_suite(j);
}

// --------------------------------------------------------------------------
// Running.

inline ScenarioReport run_scenario(const Scenario& sc, const RunContext& ctx = {}) {
  ScenarioReport rep;
  rep.id = sc.id;
  rep.kind = sc.kind;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    recipe_registry().at(sc.kind)(sc, rep, ctx);
    const bool hyp = std::all_of(rep.hypotheses.begin(), rep.hypotheses.end(), [](const auto& h) { return h.holds; });
    if (!hyp) {
      rep.status = ScenarioStatus::inconclusive;
      rep.message = "hypothesis check failed; conclusions not tested";
    } else if (rep.checks.empty()) {
      rep.status = ScenarioStatus::inconclusive;
      rep.message = "no checks were asserted";
    } else {
      rep.status = rep.all_checks_hold() ? ScenarioStatus::pass : ScenarioStatus::fail;
      rep.stage = "done";
    }
  } catch (const ConfigError& e) {
    rep.status = ScenarioStatus::inconclusive;
    rep.message = std::string("config error: ") + e.what();
  } catch (const std::exception& e) {
    rep.status = ScenarioStatus::inconclusive;
    rep.message = e.what();
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

struct SuiteReport {
  std::vector<ScenarioReport> reports;
  double seconds = 0.0;

  bool all_pass() const {
    return !reports.empty() && std::all_of(reports.begin(), reports.end(),
                                           [](const auto& r) { return r.status == ScenarioStatus::pass; });
  }
  int exit_code() const { return all_pass() ? 0 : 1; }
};

inline json to_json(const SuiteReport& s) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["scenarios"] = json::array();
  std::size_t pass = 0, fail = 0, inc = 0;
  for (const auto& r : s.reports) {
    j["scenarios"].push_back(to_json(r));
    (r.status == ScenarioStatus::pass ? pass : r.status == ScenarioStatus::fail ? fail : inc)++;
  }
  j["summary"] = {{"total", s.reports.size()}, {"pass", pass}, {"fail", fail}, {"inconclusive", inc},
                  {"all_pass", s.all_pass()}, {"seconds", s.seconds}};
  return j;
}

/// Runs every scenario on `jobs` worker threads; report order follows the config.
inline SuiteReport run_suite(const SuiteConfig& cfg, const std::string& out_dir = {},
                             const std::function<void(const ScenarioReport&)>& on_done = {}) {
  if (cfg.scenarios.empty()) throw ConfigError("empty scenario list (refusing a vacuous pass)");
  SuiteReport suite;
  suite.reports.resize(cfg.scenarios.size());
  const RunContext ctx{out_dir};
  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<std::size_t> next{0};
  std::mutex done_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cfg.scenarios.size();) {
      suite.reports[i] = run_scenario(cfg.scenarios[i], ctx);
      if (on_done) {
        std::lock_guard<std::mutex> lock(done_mu);
        on_done(suite.reports[i]);
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, cfg.scenarios.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  suite.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream os(std::filesystem::path(out_dir) / "report.json");
    os << to_json(suite).dump(2) << '\n';
  }
  return suite;
}

}  // namespace growthlab
