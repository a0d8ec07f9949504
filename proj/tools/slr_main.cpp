// Command-line front end: reproduce the packing tables, query single
// parameter pairs, run sweeps, dump side curves and run the verification
// checks. CSV on stdout by default (JSON with --json), diagnostics on
// stderr. Exit codes: 0 success, 1 numeric failure, 2 usage/validation.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "slr/ball_volume.hpp"
#include "slr/checks.hpp"
#include "slr/errors.hpp"
#include "slr/packing.hpp"
#include "slr/prism.hpp"
#include "slr/report.hpp"
#include "slr/tables.hpp"

namespace {

struct GlobalOpts {
  bool json = false;
  int precision = -1;  // -1: per-column defaults (6 for table values)
  slr::ToleranceConfig tol;
};

void load_config_file(const std::string& path, slr::ToleranceConfig& tol) {
  std::ifstream in(path);
  if (!in) throw slr::validation_error("config file not readable: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw slr::validation_error("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "ode_rel_tol")
        tol.ode_rel_tol = std::stod(value);
      else if (key == "ode_abs_tol")
        tol.ode_abs_tol = std::stod(value);
      else if (key == "newton_tol")
        tol.newton_tol = std::stod(value);
      else if (key == "fd_step")
        tol.fd_step = std::stod(value);
      else if (key == "quad_rel_tol")
        tol.quad_rel_tol = std::stod(value);
      else if (key == "max_newton_iters")
        tol.max_newton_iters = std::stoi(value);
      else
        throw slr::validation_error("config line " + std::to_string(line_no) +
                                    ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw slr::validation_error("config line " + std::to_string(line_no) +
                                  ": bad value for '" + key + "'");
    }
  }
}

slr::OutputTable packing_columns(bool verbose) {
  slr::OutputTable t;
  t.columns = {{"p", -1},       {"q", -1},        {"rho_opt", 6},
               {"vol_ball", 6}, {"vol_prism", 6}, {"delta_opt", 6}};
  if (verbose) {
    t.columns.push_back({"t_min", 9});
    t.columns.push_back({"psi_min", 9});
    t.columns.push_back({"ball_est_error", 15});
    t.columns.push_back({"ball_evaluations", -1});
    t.columns.push_back({"distance_calls", -1});
  }
  return t;
}

std::vector<double> packing_row(const slr::PackingResult& r, bool verbose) {
  std::vector<double> row = {static_cast<double>(r.p), static_cast<double>(r.q),
                             r.rho_opt,                r.vol_ball,
                             r.vol_prism,              r.density};
  if (verbose) {
    row.push_back(r.diagnostics.t_min);
    row.push_back(r.diagnostics.psi_min);
    row.push_back(r.diagnostics.ball_est_error);
    row.push_back(static_cast<double>(r.diagnostics.ball_evaluations));
    row.push_back(static_cast<double>(r.diagnostics.distance_calls));
  }
  return row;
}

/// Packing rows for a fixed pair list; failed rows are kept in place with
/// NaN values and reported on stderr.
int emit_packing_table(const std::vector<std::pair<int, int>>& pairs, const GlobalOpts& g) {
  const slr::SweepResult res = slr::sweep(pairs, g.tol);
  slr::OutputTable table = packing_columns(false);
  const double nan = std::nan("");
  int failures = 0;
  std::size_t ri = 0, si = 0;
  for (const auto& [p, q] : pairs) {
    if (ri < res.rows.size() && res.rows[ri].p == p && res.rows[ri].q == q) {
      table.rows.push_back(packing_row(res.rows[ri++], false));
    } else if (si < res.skipped.size() && res.skipped[si].p == p && res.skipped[si].q == q) {
      table.rows.push_back(
          {static_cast<double>(p), static_cast<double>(q), nan, nan, nan, nan});
      std::cerr << "row (" << p << "," << q << ") failed: " << res.skipped[si].reason << "\n";
      ++si;
      ++failures;
    }
  }
  std::cout << (g.json ? slr::to_json(table, g.precision) : slr::to_csv(table, g.precision));
  return failures == 0 ? 0 : 1;
}

int cmd_table1(const GlobalOpts& g) {
  slr::OutputTable table;
  table.columns = {{"p", -1}, {"q", -1}, {"curvature", 6}, {"radius", 6}};
  for (const auto& [p, q] : slr::table1_pairs()) {
    const slr::PrismParams params = slr::validate(p, q);
    table.rows.push_back({static_cast<double>(p), static_cast<double>(q),
                          slr::curvature(params), slr::curve_radius(params)});
  }
  std::cout << (g.json ? slr::to_json(table, g.precision) : slr::to_csv(table, g.precision));
  return 0;
}

int cmd_density(int p, int q, bool verbose, const GlobalOpts& g) {
  const slr::PackingResult r = slr::packing_density(slr::validate(p, q), g.tol);
  slr::OutputTable table = packing_columns(verbose);
  table.rows.push_back(packing_row(r, verbose));
  if (g.json)
    std::cout << slr::json_row(table, table.rows[0], g.precision) << "\n";
  else
    std::cout << slr::to_csv(table, g.precision);
  return 0;
}

int cmd_sweep(int q, int p_from, int p_to, const GlobalOpts& g) {
  if (p_from > p_to) throw slr::validation_error("empty range: --p-from > --p-to");
  std::vector<std::pair<int, int>> pairs;
  for (int p = p_from; p <= p_to; ++p) pairs.emplace_back(p, q);
  const slr::SweepResult res = slr::sweep(pairs, g.tol);
  if (res.rows.empty()) {
    std::string why = "no valid (p,q) pairs in the requested range";
    if (!res.skipped.empty()) why += "; first rejection: " + res.skipped.front().reason;
    throw slr::validation_error(why);
  }
  const slr::ArgmaxResult best = slr::argmax_density(res.rows);
  int failures = 0;
  for (const auto& skip : res.skipped) {
    if (skip.numeric_failure) {
      std::cerr << "row (" << skip.p << "," << skip.q << ") failed: " << skip.reason << "\n";
      ++failures;
    }
  }
  slr::OutputTable table = packing_columns(false);
  for (const auto& row : res.rows) table.rows.push_back(packing_row(row, false));
  if (g.json) {
    std::string out = "{\n\"rows\": ";
    out += slr::to_json(table, g.precision);
    out.pop_back();  // drop the trailing newline inside the object
    out += ",\n\"argmax\": " + slr::json_row(table, packing_row(best.best, false), g.precision);
    out += ",\n\"near_ties\": [";
    for (std::size_t i = 0; i < best.near_ties.size(); ++i) {
      if (i) out += ',';
      out += "{\"p\":" + std::to_string(best.near_ties[i].first) +
             ",\"q\":" + std::to_string(best.near_ties[i].second) + "}";
    }
    out += "]\n}\n";
    std::cout << out;
  } else {
    std::cout << slr::to_csv(table, g.precision);
    std::cout << "# argmax p=" << best.best.p << " q=" << best.best.q
              << " delta_opt=" << slr::format_fixed(best.best.density, g.precision) << "\n";
    if (!best.near_ties.empty()) {
      std::cout << "# near-ties within 1e-7:";
      for (const auto& [tp, tq] : best.near_ties) std::cout << " (" << tp << "," << tq << ")";
      std::cout << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_curve(int p, int q, int samples, const GlobalOpts& g) {
  if (samples < 2) throw slr::validation_error("--samples must be at least 2");
  const slr::PrismParams params = slr::validate(p, q);
  const slr::SideCurve curve(params);
  slr::OutputTable table;
  table.columns = {{"t", 6}, {"y", 6}, {"z", 6}, {"r", 6}, {"theta", 6}};
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const slr::InhomogeneousCoords c = curve.point(t);
    table.rows.push_back({t, c.y, c.z, curve.radius_hyperbolic(t), curve.theta(t)});
  }
  std::cout << (g.json ? slr::to_json(table, g.precision) : slr::to_csv(table, g.precision));

  // circle-fit diagnostic: the side curves are Euclidean circular arcs
  const auto p1 = curve.point(0.0), p2 = curve.point(0.5), p3 = curve.point(1.0);
  const double ax = p2.y - p1.y, ay = p2.z - p1.z;
  const double bx = p3.y - p1.y, by = p3.z - p1.z;
  const double d = 2.0 * (ax * by - ay * bx);
  const double ux = (by * (ax * ax + ay * ay) - ay * (bx * bx + by * by)) / d;
  const double uy = (ax * (bx * bx + by * by) - bx * (ax * ax + ay * ay)) / d;
  const double cy = p1.y + ux, cz = p1.z + uy, radius = std::hypot(ux, uy);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto c = curve.point(static_cast<double>(i) / (samples - 1));
    worst = std::max(worst, std::abs(std::hypot(c.y - cy, c.z - cz) - radius));
  }
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << worst;
  std::cerr << "circle fit residual = " << os.str() << " (arc radius "
            << slr::format_fixed(radius, 6) << ", closed form "
            << slr::format_fixed(slr::curve_radius(params), 6) << ")\n";
  return 0;
}

int cmd_check(const std::string& filter, double perturbation, const GlobalOpts& g) {
  slr::CheckOptions opt;
  opt.tol = g.tol;
  opt.metric_perturbation = perturbation;
  const std::vector<slr::CheckResult> results = slr::run_checks(filter, opt);
  if (results.empty()) throw slr::validation_error("no check matches filter '" + filter + "'");
  int failures = 0;
  if (g.json) {
    std::cout << "[\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      std::cout << "  {\"name\":\"" << r.name << "\",\"pass\":" << (r.pass ? "true" : "false")
                << ",\"detail\":\"" << r.detail << "\"}" << (i + 1 < results.size() ? "," : "")
                << "\n";
    }
    std::cout << "]\n";
  }
  for (const auto& r : results) {
    if (!g.json) std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;
  std::string config_file;
  double ode_tol_flag = 0.0, quad_tol_flag = 0.0;

  CLI::App app{"Geodesic ball packings of regular prism tilings in the SL(2,R)~ geometry"};
  app.require_subcommand(1);
  app.add_flag("--json", g.json, "emit JSON instead of CSV");
  app.add_option("--precision", g.precision, "decimal places for table output (default 6)")
      ->check(CLI::Range(0, 17));
  auto* ode_opt = app.add_option("--ode-tol", ode_tol_flag,
                                 "relative and absolute tolerance of the geodesic integrator");
  auto* quad_opt =
      app.add_option("--quad-tol", quad_tol_flag, "relative tolerance of the volume quadrature");
  app.add_option("--config", config_file, "key=value file with tolerance settings");

  auto* t1 = app.add_subcommand("table1", "side-curve curvatures C_p(q) and arc radii");
  auto* t2 = app.add_subcommand("table2", "packing table for 3 <= p <= 8");
  auto* t3 = app.add_subcommand("table3", "packing table for large p");

  int dp = 0, dq = 0;
  bool verbose = false;
  auto* den = app.add_subcommand("density", "optimal packing density for one (p,q)");
  den->add_option("p", dp, "p-gon order")->required();
  den->add_option("q", dq, "side-edge rotation order")->required();
  den->add_flag("--verbose", verbose, "append solver diagnostics");

  int sq = 0, p_from = 0, p_to = 0;
  auto* sw = app.add_subcommand("sweep", "density sweep over p at fixed q");
  sw->add_option("--q", sq, "fixed q")->required();
  sw->add_option("--p-from", p_from, "first p")->required();
  sw->add_option("--p-to", p_to, "last p")->required();

  int cp = 0, cq = 0, samples = 100;
  auto* cu = app.add_subcommand("curve", "sample the side curve of the base figure");
  cu->add_option("p", cp, "p-gon order")->required();
  cu->add_option("q", cq, "side-edge rotation order")->required();
  cu->add_option("--samples", samples, "number of samples")->capture_default_str();

  std::string filter;
  double perturbation = 0.0;
  auto* ch = app.add_subcommand("check", "run the verification suite");
  ch->add_option("--filter", filter, "run only checks whose name contains this substring");
  ch->add_option("--perturb-metric", perturbation,
                 "test hook: offset added to g_theta_theta in the volume-element check")
      ->group("");

  // let --json/--precision/tolerance flags appear after the subcommand too
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (!config_file.empty()) load_config_file(config_file, g.tol);
    if (ode_opt->count() > 0) {
      g.tol.ode_rel_tol = ode_tol_flag;
      g.tol.ode_abs_tol = ode_tol_flag;
    }
    if (quad_opt->count() > 0) g.tol.quad_rel_tol = quad_tol_flag;

    if (t1->parsed()) return cmd_table1(g);
    if (t2->parsed()) return emit_packing_table(slr::table2_pairs(), g);
    if (t3->parsed()) return emit_packing_table(slr::table3_pairs(), g);
    if (den->parsed()) return cmd_density(dp, dq, verbose, g);
    if (sw->parsed()) return cmd_sweep(sq, p_from, p_to, g);
    if (cu->parsed()) return cmd_curve(cp, cq, samples, g);
    if (ch->parsed()) return cmd_check(filter, perturbation, g);
  } catch (const slr::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const slr::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
