// mdlab: command-line front end for the measure-data laboratory.
//
// Subcommands:
//   exponents  print the exponent table for (n, p, theta, q)
//   analyze    evaluate a norm estimator on a grid binary file
//   solve      run a regularized solve described by a config file
//   verify     run a named experiment and report pass/fail

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mdlab/config.hpp"
#include "mdlab/experiments.hpp"
#include "mdlab/exponents.hpp"
#include "mdlab/grid.hpp"
#include "mdlab/io.hpp"
#include "mdlab/norms.hpp"
#include "mdlab/solver.hpp"

namespace {

using namespace mdlab;

struct ExponentArgs {
  int n = 2;
  double p = 2.0;
  double theta = -1.0;  // defaults to n when unset
  double q = 1.0;
  std::string format = "text";
};

// Rows are (name, value-string); values that are undefined at the given
// parameters are listed with a reason instead of a number.
std::vector<std::pair<std::string, std::string>> exponent_rows(const ExponentArgs& a) {
  const double theta = a.theta < 0.0 ? static_cast<double>(a.n) : a.theta;
  ExponentContext ctx(a.n, a.p, theta, a.q);
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("regime", to_string(classify_regime(ctx)));
  auto value = [&](const char* name, auto&& fn) {
    try {
      rows.emplace_back(name, fmt_g(fn()));
    } catch (const std::exception& e) {
      std::string msg = e.what();
      const auto colon = msg.find(": ");
      rows.emplace_back(name, "undefined (" + (colon == std::string::npos ? msg : msg.substr(colon + 2)) + ")");
    }
  };
  value("b", [&] { return exponent_b(a.n, a.p); });
  value("m", [&] { return exponent_m(a.p, theta); });
  value("sigma(q)", [&] { return sigma_q(a.n, a.p, a.q); });
  value("sigma(q,theta)", [&] { return sigma_q_theta(a.p, theta, a.q); });
  value("delta(q)", [&] { return delta_q(a.p, theta, a.q); });
  value("sigma_cap", [&] { return sigma_capacitary(a.p, theta); });
  return rows;
}

int run_exponents(const ExponentArgs& a) {
  const auto rows = exponent_rows(a);
  if (a.format == "csv") {
    std::printf("name,value\n");
    for (const auto& [name, val] : rows) std::printf("%s,%s\n", name.c_str(), val.c_str());
    return 0;
  }
  std::printf("n = %d, p = %s, theta = %s, q = %s\n", a.n, fmt_g(a.p).c_str(),
              fmt_g(a.theta < 0.0 ? static_cast<double>(a.n) : a.theta).c_str(),
              fmt_g(a.q).c_str());
  for (const auto& [name, val] : rows) std::printf("  %-16s %s\n", name.c_str(), val.c_str());
  return 0;
}

struct AnalyzeArgs {
  std::string file;
  std::string norm;
  double q = 1.0;
  double alpha = 0.5;
  double theta = -1.0;
  double t = 2.0;
  double vmo_radius = 0.25;
  std::vector<double> center;
  double radius = 0.0;  // 0 = whole domain
  std::string out;
};

Region make_region(const AnalyzeArgs& a) {
  if (a.radius <= 0.0) return Region::all();
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (std::size_t d = 0; d < a.center.size() && d < 3; ++d) c[static_cast<int>(d)] = a.center[d];
  return Region::in_ball(c, a.radius);
}

int run_analyze(const AnalyzeArgs& a) {
  const auto data = read_grid_binary(a.file);
  const bool is_field = data.values.cols() > 1;
  if (is_field && data.values.cols() != data.grid->dim)
    throw std::invalid_argument("analyze: file has " + std::to_string(data.values.cols()) +
                                " components on a " + std::to_string(data.grid->dim) + "-d grid");
  GridFunction f = is_field ? magnitude(to_field(data)) : to_function(data);
  const Region region = make_region(a);
  const double theta = a.theta < 0.0 ? static_cast<double>(data.grid->dim) : a.theta;

  NormReport rep;
  rep.kind = a.norm;
  rep.h = data.grid->h;
  if (a.norm == "lq") {
    rep.value = lq_norm(f, a.q, region);
    rep.q = a.q;
  } else if (a.norm == "morrey") {
    rep.value = morrey_norm(f, a.q, theta, region);
    rep.q = a.q;
    rep.theta = theta;
  } else if (a.norm == "gagliardo") {
    rep.value = gagliardo_seminorm(f, a.alpha, a.q, region);
    rep.q = a.q;
    rep.alpha = a.alpha;
  } else if (a.norm == "nikolski") {
    rep.value = nikolski_seminorm(f, a.alpha, a.q, region);
    rep.q = a.q;
    rep.alpha = a.alpha;
  } else if (a.norm == "marcinkiewicz") {
    rep.value = marcinkiewicz_norm(f, a.t, region);
    rep.t = a.t;
  } else if (a.norm == "mm") {
    rep.value = marcinkiewicz_morrey_norm(f, a.t, theta, region);
    rep.t = a.t;
    rep.theta = theta;
  } else if (a.norm == "bmo") {
    rep.value = bmo_seminorm(f, region);
  } else if (a.norm == "vmo") {
    rep.value = vmo_modulus(f, a.vmo_radius, region);
    rep.alpha = a.vmo_radius;
  } else {
    throw std::invalid_argument("analyze: unknown norm '" + a.norm + "'");
  }

  auto opt = [](const std::optional<double>& v) { return v ? fmt_g(*v) : std::string(); };
  const std::vector<std::string> header = {"kind", "value", "q", "alpha", "theta", "t", "h"};
  const std::vector<std::string> row = {rep.kind,       fmt_g(rep.value), opt(rep.q),
                                        opt(rep.alpha), opt(rep.theta),   opt(rep.t),
                                        fmt_g(rep.h)};
  for (std::size_t i = 0; i < header.size(); ++i)
    std::printf("%s%s", i ? "," : "", header[i].c_str());
  std::printf("\n");
  for (std::size_t i = 0; i < row.size(); ++i) std::printf("%s%s", i ? "," : "", row[i].c_str());
  std::printf("\n");
  if (!a.out.empty()) write_csv(a.out, header, {row});
  return 0;
}

int run_solve(const std::string& config_path, const std::string& prefix) {
  const Config cfg = load_config(config_path);
  const SolveConfig sc = load_solve_config(cfg);
  const Solution sol = solve_regularized(sc.spec, sc.k, sc.options);
  const GridVectorField du = gradient(sol.u);

  write_grid_function(prefix + "-u.mdg", sol.u);
  write_grid_field(prefix + "-du.mdg", du);
  const auto& r = sol.report;
  write_csv(prefix + "-report.csv",
            {"k", "s_k", "iterations", "backtracks", "energy", "residual", "converged"},
            {{std::to_string(r.k), fmt_g(r.s_k), std::to_string(r.iterations),
              std::to_string(r.backtracks), fmt_g(r.energy), fmt_g(r.residual),
              r.converged ? "1" : "0"}});
  std::printf("solved: k=%d s_k=%s iterations=%d energy=%s residual=%s converged=%d\n", r.k,
              fmt_g(r.s_k).c_str(), r.iterations, fmt_g(r.energy).c_str(),
              fmt_g(r.residual).c_str(), r.converged ? 1 : 0);
  if (!r.converged) {
    std::fprintf(stderr, "solve: did not reach the residual tolerance\n");
    return 1;
  }
  return 0;
}

int run_verify(const std::string& id, Index resolution, const std::string& config_path,
               const std::string& out_dir) {
  Index res = resolution;
  if (res == 0 && !config_path.empty()) {
    const Config cfg = load_config(config_path);
    res = static_cast<Index>(cfg.number_or("experiment", "resolution", 0.0));
  }
  const ExperimentReport rep = run_experiment(id, res);
  for (const auto& r : rep.rows)
    std::printf("%-28s h=%-12s computed=%-16s expected=%-12s %s\n", r.parameter.c_str(),
                fmt_g(r.h).c_str(), fmt_g(r.computed).c_str(), fmt_g(r.expected).c_str(),
                r.pass ? "pass" : "FAIL");
  write_report(rep, out_dir);
  std::printf("%s: %s\n", rep.id.c_str(), rep.passed() ? "all checks passed" : "FAILED");
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"measure-data laboratory"};
  app.require_subcommand(1);

  ExponentArgs ea;
  auto* exps = app.add_subcommand("exponents", "print the exponent table for (n, p, theta, q)");
  exps->add_option("--n", ea.n, "space dimension (>= 2)");
  exps->add_option("--p", ea.p, "growth exponent (>= 2)");
  exps->add_option("--theta", ea.theta, "density order in [0, n]; defaults to n");
  exps->add_option("--q", ea.q, "integrability exponent");
  exps->add_option("--format", ea.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));

  AnalyzeArgs aa;
  auto* ana = app.add_subcommand("analyze", "evaluate a norm estimator on a grid binary file");
  ana->add_option("file", aa.file, "grid binary input")->required()->check(CLI::ExistingFile);
  ana->add_option("--norm", aa.norm, "estimator")
      ->required()
      ->check(CLI::IsMember(
          {"lq", "morrey", "gagliardo", "nikolski", "marcinkiewicz", "mm", "bmo", "vmo"}));
  ana->add_option("--q", aa.q, "integrability exponent");
  ana->add_option("--alpha", aa.alpha, "fractional order in (0, 1)");
  ana->add_option("--theta", aa.theta, "Morrey order; defaults to the grid dimension");
  ana->add_option("--t", aa.t, "Marcinkiewicz exponent");
  ana->add_option("--vmo-radius", aa.vmo_radius, "radius cap for the vmo modulus");
  ana->add_option("--center", aa.center, "region center coordinates")->expected(1, 3);
  ana->add_option("--radius", aa.radius, "restrict to the ball of this radius (0 = everywhere)");
  ana->add_option("--out", aa.out, "also write the CSV row to this file");

  std::string solve_config, solve_prefix = "solution";
  auto* slv = app.add_subcommand("solve", "run a regularized solve described by a config file");
  slv->add_option("--config", solve_config, "problem description (TOML-style)")
      ->required()
      ->check(CLI::ExistingFile);
  slv->add_option("--out-prefix", solve_prefix, "output prefix for -u.mdg, -du.mdg, -report.csv");

  std::string verify_id, verify_config, verify_out = ".";
  Index verify_res = 0;
  auto* ver = app.add_subcommand("verify", "run a named experiment and report pass/fail");
  ver->add_option("experiment", verify_id, "one of: " + [] {
        std::string s;
        for (const auto& id : experiment_ids()) s += (s.empty() ? "" : ", ") + id;
        return s;
      }())
      ->required();
  ver->add_option("--resolution", verify_res, "finest node count per side (0 = default)");
  ver->add_option("--config", verify_config, "config file providing [experiment] resolution")
      ->check(CLI::ExistingFile);
  ver->add_option("--out", verify_out, "directory for CSV and plot data");

  CLI11_PARSE(app, argc, argv);

  try {
    if (exps->parsed()) return run_exponents(ea);
    if (ana->parsed()) return run_analyze(aa);
    if (slv->parsed()) return run_solve(solve_config, solve_prefix);
    if (ver->parsed()) return run_verify(verify_id, verify_res, verify_config, verify_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
