// growthlab command-line front end.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "growthlab/growthlab.hpp"

namespace gl = growthlab;
using gl::json;

namespace {

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw gl::ConfigError("not a number: '" + tok + "'");
    }
  }
  return out;
}

gl::Sector parse_sector(const std::string& s) {
  const auto v = split_numbers(s);
  if (v.size() != 2) throw gl::ConfigError("--sector expects 'alpha,beta'");
  return gl::Sector(v[0], v[1]);
}

/// "first:last" on the 1 - 2^{-i/4} ladder, or an explicit "r1,r2,...".
std::vector<double> parse_grid(const std::string& s) {
  if (const auto c = s.find(':'); c != std::string::npos) {
    const int a = std::stoi(s.substr(0, c)), b = std::stoi(s.substr(c + 1));
    if (!(a >= 1 && b > a)) throw gl::ConfigError("--grid first:last needs 1 <= first < last");
    return gl::default_grid(a, b);
  }
  return split_numbers(s);
}

/// JSON object, or shorthand "name:key=value,key=value".
json parse_zoo_spec(const std::string& s) {
  if (!s.empty() && s.front() == '{') return json::parse(s);
  json j;
  const auto c = s.find(':');
  j["zoo"] = s.substr(0, c);
  if (c != std::string::npos) {
    std::stringstream ss(s.substr(c + 1));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw gl::ConfigError("expected key=value in '" + kv + "'");
      j[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
  }
  return j;
}

struct Common {
  std::string sector = "0,3.141592653589793";
  double epsilon = 0.0;
  std::string pq = "1,1";
  std::string grid = "4:60";
  std::string out;

  gl::Sector domain() const {
    const gl::Sector s = parse_sector(sector);
    return epsilon > 0.0 ? gl::shrink(s, epsilon).effective() : s;
  }
  std::pair<int, int> pq_pair() const {
    const auto v = split_numbers(pq);
    if (v.size() != 2) throw gl::ConfigError("--pq expects 'p,q'");
    return {static_cast<int>(v[0]), static_cast<int>(v[1])};
  }
};

void add_common(CLI::App* app, Common& c, bool with_grid = true) {
  app->add_option("--sector", c.sector, "sector bounds alpha,beta in radians");
  app->add_option("--epsilon", c.epsilon, "shrink the sector by epsilon on both sides");
  if (with_grid) app->add_option("--grid", c.grid, "radius grid: first:last (r = 1 - 2^{-i/4}) or r1,r2,...");
  app->add_option("--out", c.out, "output file (or directory for verify); stdout when omitted");
}

std::ostream& sink(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growth analysis of analytic functions and linear ODEs in sectors of the unit disc"};
  app.require_subcommand(1);
  Common common;

  // map
  auto* map = app.add_subcommand("map", "sample the sector-to-disc map on a polar grid (CSV re_z,im_z,re_u,im_u)");
  add_common(map, common);
  int angles = 16;
  map->add_option("--angles", angles, "angles per radius");

  // characteristic
  auto* ch = app.add_subcommand("characteristic", "build an M, T or T0 curve (CSV r,value,log_scale)");
  add_common(ch, common);
  std::string function = "h:mu=2", kind = "T0";
  ch->add_option("--function", function, "zoo function: JSON or name:key=value,...");
  ch->add_option("--kind", kind, "M, T or T0")->check(CLI::IsMember({"M", "T", "T0"}));

  // order
  auto* ord = app.add_subcommand("order", "estimate [p,q]-order or type of a curve CSV (JSON)");
  add_common(ord, common, false);
  ord->add_option("--pq", common.pq, "p,q");
  std::string curve_path, mode = "both", ratios_out;
  double type_order = 0.0;
  ord->add_option("--curve", curve_path, "curve CSV from 'characteristic'")->required();
  ord->add_option("--kind", kind, "curve kind: M, T or T0")->check(CLI::IsMember({"M", "T", "T0"}));
  ord->add_option("--mode", mode, "limsup, liminf or both")->check(CLI::IsMember({"limsup", "liminf", "both"}));
  ord->add_option("--type", type_order, "estimate the type at this order instead");
  ord->add_option("--ratios", ratios_out, "write r,ratio,running_extremum CSV (limsup mode) here");

  // transform
  auto* tr = app.add_subcommand("transform", "sample B_j of the conjugated equation (CSV re_u,im_u,j,re_B,im_B)");
  add_common(tr, common, false);
  std::string equation = "h-equation:mu=2";
  double u_radius = 0.9;
  int u_points = 8;
  tr->add_option("--equation", equation, "zoo equation: JSON or name:key=value,...");
  tr->add_option("--u-radius", u_radius, "largest |u| sampled");
  tr->add_option("--points", u_points, "radial and angular points");

  // solve
  auto* so = app.add_subcommand("solve", "integrate a zoo equation along a ray (CSV r,theta,log_abs_f,phase)");
  add_common(so, common);
  double theta = 0.0, r_end = 0.99;
  int series_order = 20;
  so->add_option("--equation", equation, "zoo equation: JSON or name:key=value,...");
  so->add_option("--theta", theta, "ray direction");
  so->add_option("--r-end", r_end, "final radius");
  so->add_option("--series-order", series_order, "local Taylor order");

  // verify
  auto* ve = app.add_subcommand("verify", "run a scenario suite; exit 0 iff every scenario passes");
  add_common(ve, common, false);
  std::string config = "configs/default_suite.json";
  std::size_t jobs = 0;
  ve->add_option("--config", config, "suite config (JSON)");
  ve->add_option("--jobs", jobs, "worker threads (overrides the config)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ofstream file;
    if (map->parsed()) {
      const gl::Sector s = common.domain();
      std::ostream& os = sink(common.out, file);
      os.precision(17);
      os << "re_z,im_z,re_u,im_u\n";
      for (double r : parse_grid(common.grid))
        for (int i = 0; i < angles; ++i) {
          const double t = s.alpha() + (s.beta() - s.alpha()) * (i + 0.5) / angles;
          const gl::cplx z = std::polar(r, t);
          const gl::cplx u = gl::map_to_disc(parse_sector(common.sector), z);
          os << z.real() << ',' << z.imag() << ',' << u.real() << ',' << u.imag() << '\n';
        }
      return 0;
    }
    if (ch->parsed()) {
      const auto f = gl::zoo_function(parse_zoo_spec(function));
      const auto k = gl::curve_kind_from_string(kind);
      const auto c = gl::build_curve(f, k, k == gl::CurveKind::ahlfors_shimizu_T0 ? common.domain() : gl::Sector::full_disc(),
                                     parse_grid(common.grid));
      gl::write_curve_csv(sink(common.out, file), c);
      return 0;
    }
    if (ord->parsed()) {
      const auto c = gl::read_curve_csv(curve_path, gl::curve_kind_from_string(kind));
      const auto [p, q] = common.pq_pair();
      json out = json::array();
      for (auto m : {gl::EstimateMode::limsup, gl::EstimateMode::liminf}) {
        if (mode != "both" && mode != gl::to_string(m)) continue;
        if (type_order > 0.0) {
          out.push_back(gl::to_json(gl::pq_type(c, p, q, type_order, m)));
        } else {
          const auto e = c.kind == gl::CurveKind::max_modulus ? gl::pq_order_from_max_modulus(c, p, q, m)
                                                             : gl::pq_order(c, p, q, m);
          if (!ratios_out.empty() && m == gl::EstimateMode::limsup) gl::emit_plot_data(e, ratios_out);
          out.push_back(gl::to_json(e));
        }
      }
      sink(common.out, file) << out.dump(2) << '\n';
      return 0;
    }
    if (tr->parsed()) {
      const auto eq = gl::zoo_equation(parse_zoo_spec(equation));
      const auto t = gl::transform_to_disc(*eq.ode, parse_sector(common.sector));
      std::ostream& os = sink(common.out, file);
      os.precision(17);
      os << "re_u,im_u,j,re_B,im_B\n";
      for (int i = 0; i < u_points; ++i)
        for (int a = 0; a < u_points; ++a) {
          const gl::cplx u = std::polar(u_radius * (i + 1) / u_points, gl::kTwoPi * a / u_points);
          const auto b = t.coefficient_values(u);
          for (std::size_t j = 0; j < b.size(); ++j)
            os << u.real() << ',' << u.imag() << ',' << j << ',' << b[j].real() << ',' << b[j].imag() << '\n';
        }
      return 0;
    }
    if (so->parsed()) {
      const auto eq = gl::zoo_equation(parse_zoo_spec(equation));
      gl::SolverOptions o;
      o.series_order = static_cast<std::size_t>(series_order);
      std::vector<double> outs;
      for (double r : parse_grid(common.grid))
        if (r < r_end) outs.push_back(r);
      const auto sol = gl::solve_ray(*eq.ode, theta, 0.0, r_end, eq.seed, o, outs);
      std::ostream& os = sink(common.out, file);
      os.precision(17);
      os << "r,theta,log_abs_f,phase\n";
      for (const auto& smp : sol.samples) os << smp.r << ',' << theta << ',' << smp.log_abs() << ',' << smp.phase() << '\n';
      std::cerr << "steps " << sol.steps << ", rejected " << sol.rejected << ", max residual " << sol.max_residual << '\n';
      return 0;
    }
    if (ve->parsed()) {
      auto cfg = gl::load_suite(config);
      if (jobs > 0) cfg.jobs = jobs;
      const auto suite = gl::run_suite(cfg, common.out, [](const gl::ScenarioReport& r) {
        std::cerr << "[" << gl::to_string(r.status) << "] " << r.id << " (" << r.seconds << " s)";
        if (!r.message.empty()) std::cerr << ": " << r.message << " [stage: " << r.stage << "]";
        std::cerr << '\n';
        for (const auto& c : r.checks)
          if (!c.holds) std::cerr << "    violated: " << c.name << " (" << c.anchor << "), margin " << c.margin << '\n';
      });
      if (common.out.empty()) std::cout << gl::to_json(suite).dump(2) << '\n';
      std::cerr << (suite.all_pass() ? "all scenarios passed" : "some scenarios did not pass") << " in "
                << suite.seconds << " s\n";
      return suite.exit_code();
    }
  } catch (const gl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
