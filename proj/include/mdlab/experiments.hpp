#pragma once

// Named verification experiments.  Each one turns a regularity statement into
// a desk-scale scaling check: slope fits, refinement stability, or
// fitted-constant boundedness.  Reports carry one row per assertion
// (parameter, computed, expected, pass) plus gnuplot-ready XY curves; every
// experiment is deterministic, so identical inputs give bit-identical CSV.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdlab/exponents.hpp"
#include "mdlab/green.hpp"
#include "mdlab/io.hpp"
#include "mdlab/norms.hpp"
#include "mdlab/slope_fit.hpp"
#include "mdlab/solver.hpp"

namespace mdlab {

struct ExperimentRow {
  std::string parameter;
  double h = 0.0;  // grid spacing the row refers to (0 when not grid-bound)
  double computed = 0.0;
  double expected = 0.0;
  bool pass = false;
};

struct Curve {
  std::string name;  // file stem; data written as "x y" rows
  std::string xlabel, ylabel;
  std::vector<std::pair<double, double>> points;
};

struct ExperimentReport {
  std::string id;
  std::vector<ExperimentRow> rows;
  std::vector<Curve> curves;

  bool passed() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
  void row(const std::string& parameter, double h, double computed, double expected,
           bool pass) {
    rows.push_back({parameter, h, computed, expected, pass});
  }
};

namespace detail {

inline bool within(double x, double target, double rel) {
  return std::abs(x - target) <= rel * std::abs(target);
}

inline std::string name_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// Node ladders refine by doubling the cell count: 129 -> 257 -> 513.
inline Index coarsen_nodes(Index n) { return (n - 1) / 2 + 1; }

inline std::vector<Index> node_ladder(Index finest, int levels) {
  std::vector<Index> ns(static_cast<std::size_t>(levels));
  Index n = finest;
  for (int i = levels - 1; i >= 0; --i) {
    ns[static_cast<std::size_t>(i)] = n;
    n = coarsen_nodes(n);
  }
  return ns;
}

inline Solution sola_dirac(GridPtr grid, double p, int k) {
  ProblemSpec spec;
  spec.grid = std::move(grid);
  spec.p = p;
  spec.mu = make_dirac(Eigen::Vector3d::Zero(), 1.0, spec.grid->dim);
  return solve_regularized(spec, k);
}

}  // namespace detail

// --- Weak-type sharpness of the fundamental solution's gradient ------------
//
// The gradient lies in the Marcinkiewicz space of exponent b but in no better
// Lebesgue class: the discrete weak norm must converge to the closed-form
// supremum, the level-set tail must decay with slope -b, and the L^b integral
// must keep growing under refinement.
inline ExperimentReport exp_marcinkiewicz_sharpness(Index finest = 513) {
  ExperimentReport rep;
  rep.id = "marcinkiewicz-sharpness";
  const auto gf = make_green(2, 2.0);
  const double b = exponent_b(2, 2.0);
  const double target = green_weak_sup(gf);  // 1/(4 pi)

  const auto ns = detail::node_ladder(finest, 3);
  std::vector<double> integrals;
  Curve conv{"weak-sup-convergence", "h", "sup lambda^b measure", {}};
  double sup_fine = 0.0, h_fine = 0.0;
  LevelSetProfile prof_fine;
  for (Index n : ns) {
    auto g = make_ball_grid(2, n, 1.0);
    const auto du = sample_green_gradient(gf, g);
    const auto prof = marcinkiewicz_profile(magnitude(du), b);
    conv.points.emplace_back(g->h, prof.sup_power);
    const double l2 = lq_norm(du, b);
    integrals.push_back(l2 * l2);
    sup_fine = prof.sup_power;
    h_fine = g->h;
    prof_fine = prof;
  }
  rep.row("weak_sup", h_fine, sup_fine, target, detail::within(sup_fine, target, 0.05));

  // tail slope over the upper half of the lambda grid
  std::vector<double> xs, ys;
  for (std::size_t j = prof_fine.lambdas.size() / 2; j < prof_fine.lambdas.size(); ++j)
    if (prof_fine.measures[j] > 0.0) {
      xs.push_back(prof_fine.lambdas[j]);
      ys.push_back(prof_fine.measures[j]);
    }
  const auto tail = fit_loglog(xs, ys);
  rep.row("tail_slope", h_fine, tail.slope, -b, std::abs(tail.slope + b) <= 0.1);

  // divergence of the strong L^b integral: fixed gain per grid halving
  const double expected_gain = std::log(2.0) / (2.0 * M_PI);
  for (std::size_t i = 0; i + 1 < integrals.size(); ++i) {
    const double gain = integrals[i + 1] - integrals[i];
    rep.row("lb_integral_gain", 2.0 / static_cast<double>(ns[i + 1] - 1), gain,
            expected_gain, gain >= 0.05);
  }

  // coarse three-dimensional check: n = p = 3, weak sup of |Du| = c/r
  {
    auto g3 = make_ball_grid(3, 97, 1.0);
    const auto gf3 = make_green(3, 3.0);
    const double b3 = exponent_b(3, 3.0);
    const double target3 = green_weak_sup(gf3);
    const auto du3 = sample_green_gradient(gf3, g3);
    const double sup3 = std::pow(marcinkiewicz_norm(du3, b3), b3);
    rep.row("weak_sup_3d", g3->h, sup3, target3, detail::within(sup3, target3, 0.1));
  }

  Curve tailcurve{"levelset-tail", "lambda", "measure", {}};
  for (std::size_t j = 0; j < prof_fine.lambdas.size(); ++j)
    tailcurve.points.emplace_back(prof_fine.lambdas[j], prof_fine.measures[j]);
  rep.curves.push_back(std::move(tailcurve));
  rep.curves.push_back(std::move(conv));
  return rep;
}

// --- Fractional differentiability up to (but not at) the sharp order -------
//
// The Gagliardo seminorm of the fundamental gradient at order alpha = 1 - eps
// stays finite for every eps > 0 but blows up as eps -> 0; the discrete trend
// is a ratio >= 3 between eps = 0.01 and eps = 0.5, with refinement stability
// at the safe order.
inline ExperimentReport exp_fractional_differentiability(Index finest = 513) {
  ExperimentReport rep;
  rep.id = "fractional-differentiability";
  const auto gf = make_green(2, 2.0);
  const Region inner = Region::in_ball(Eigen::Vector3d::Zero(), 0.5);
  const auto ns = detail::node_ladder(finest, 2);
  const std::vector<double> alphas = {0.5, 0.9, 0.99};

  std::vector<std::vector<double>> vals(ns.size());
  Curve trend{"seminorm-vs-alpha", "alpha", "gagliardo seminorm", {}};
  for (std::size_t gi = 0; gi < ns.size(); ++gi) {
    auto g = make_ball_grid(2, ns[gi], 1.0);
    const auto du = sample_green_gradient(gf, g);
    for (double a : alphas) {
      const double v = gagliardo_seminorm(du, a, 1.0, inner);
      vals[gi].push_back(v);
      if (gi + 1 == ns.size()) trend.points.emplace_back(a, v);
    }
    // strict monotonicity in alpha on every grid
    rep.row("monotone_in_alpha", g->h, vals[gi][2] > vals[gi][1] && vals[gi][1] > vals[gi][0],
            1.0, vals[gi][2] > vals[gi][1] && vals[gi][1] > vals[gi][0]);
  }
  const double h_fine = 2.0 / static_cast<double>(ns.back() - 1);
  const double ratio = vals.back()[2] / vals.back()[0];
  rep.row("blowup_ratio", h_fine, ratio, 3.0, ratio >= 3.0);
  const double stab = vals[1][0] / vals[0][0];
  rep.row("stability_alpha_0.5", h_fine, stab, 1.0, detail::within(stab, 1.0, 0.10));
  rep.curves.push_back(std::move(trend));
  return rep;
}

// --- Comparison-map decay in the ball radius --------------------------------
//
// Freeze data by mollifying a Dirac, solve the homogeneous comparison problem
// on nested balls, and fit the decay of the L^1 gradient distance against R;
// the decay exponent must reach sigma(1) = 1 up to the fit tolerance (steeper
// passes: the estimate is one-sided).
inline ExperimentReport exp_comparison_decay(Index finest = 257) {
  ExperimentReport rep;
  rep.id = "comparison-decay";
  auto g = make_ball_grid(2, finest, 1.0);
  ProblemSpec spec;
  spec.grid = g;
  spec.p = 2.0;
  spec.mu = make_dirac(Eigen::Vector3d::Zero(), 1.0, 2);
  const int k = 16;
  auto u = solve_regularized(spec, k);
  const auto du = gradient(u.u);

  const std::vector<double> radii = {0.4, 0.28, 0.2, 0.14, 0.1};
  std::vector<double> dist;
  Curve decay{"gradient-distance", "R", "int_{B_R} |Du - Dv|", {}};
  for (double R : radii) {
    const Ball ball{Eigen::Vector3d::Zero(), R};
    auto v = solve_homogeneous_on_ball(spec, ball, u.u, u.report.s_k);
    const auto dv = gradient(v.u);
    GridVectorField diff{g, du.v - dv.v};
    const double d = lq_norm(diff, 1.0, Region::in_ball(Eigen::Vector3d::Zero(), R));
    dist.push_back(d);
    decay.points.emplace_back(R, d);
  }
  const auto fit = fit_loglog(radii, dist);
  const double sigma1 = sigma_q(2, 2.0, 1.0);
  rep.row("decay_slope", g->h, fit.slope, sigma1, fit.slope >= 0.8 * sigma1);
  rep.row("fit_residual", g->h, fit.max_residual, 0.15, fit.max_residual < 0.15);
  rep.curves.push_back(std::move(decay));
  return rep;
}

// --- Morrey-scale bounds in the super-capacitary regime ---------------------
//
// For the Dirac datum theta = n: the gradient's Marcinkiewicz-Morrey norm at
// (m, theta) and its Morrey norm at (q, delta(q)) must be refinement-stable,
// and the density-fit/regime routing must agree with the classifier.
inline ExperimentReport exp_morrey_density(Index finest = 257, double alpha = 2.0,
                                           double p = 2.0, double q = 1.0) {
  ExperimentReport rep;
  rep.id = "morrey-density";
  const int n = 2;
  if (alpha < p)
    throw std::domain_error(
        "morrey-density: alpha < p is the capacitary regime; run the capacitary "
        "experiment instead");
  const ExponentContext ctx{n, p, alpha};
  if (classify_regime(ctx) != Regime::SuperCapacitary)
    throw std::domain_error("morrey-density: configuration must classify as super-capacitary");
  const double m = exponent_m(p, alpha);
  const double dq = delta_q(p, alpha, q);

  const auto ns = detail::node_ladder(finest, 2);
  std::vector<double> mm_vals, mo_vals;
  Curve table{"norms-vs-h", "h", "norm", {}};
  const bool dirac_case = alpha >= static_cast<double>(n);
  for (Index nn : ns) {
    auto g = make_ball_grid(n, nn, 1.0);
    ProblemSpec spec;
    spec.grid = g;
    spec.p = p;
    if (dirac_case) {
      spec.mu = make_dirac(Eigen::Vector3d::Zero(), 1.0, n);
    } else {
      spec.mu = radial_singular_density(alpha, g);
    }
    auto sol = solve_regularized(spec, 16);
    const auto du = gradient(sol.u);
    const auto mag = magnitude(du);
    const std::vector<Eigen::Vector3d> centers = {Eigen::Vector3d::Zero()};
    mm_vals.push_back(marcinkiewicz_morrey_norm(mag, m, alpha, Region::all(), centers));
    mo_vals.push_back(morrey_norm(mag, q, dq, Region::all(), centers));
    table.points.emplace_back(g->h, mm_vals.back());
  }
  const double h_fine = 2.0 / static_cast<double>(ns.back() - 1);
  const double mm_stab = mm_vals[1] / mm_vals[0];
  rep.row("mm_norm_stability", h_fine, mm_stab, 1.0, detail::within(mm_stab, 1.0, 0.15));
  const double mo_stab = mo_vals[1] / mo_vals[0];
  rep.row("morrey_norm_stability", h_fine, mo_stab, 1.0, detail::within(mo_stab, 1.0, 0.15));
  if (dirac_case) {
    // the exact gradient gives int_{B_R(0)} |Du| = R, so the L^{1,delta(1)}
    // norm with delta(1) = 1 is 1 on origin-centered balls
    rep.row("morrey_value", h_fine, mo_vals.back(), 1.0,
            detail::within(mo_vals.back(), 1.0, 0.15));
  }
  // regime routing cross-check against the measured density exponent
  {
    auto g = make_ball_grid(n, ns.front(), 1.0);
    DiscreteMeasure mu;
    if (dirac_case) {
      mu = make_dirac(Eigen::Vector3d::Zero(), 1.0, n);
    } else {
      mu = radial_singular_density(alpha, g);
    }
    const auto fit = measure_density_fit(mu);
    rep.row("theta_hat", g->h, fit.theta_hat, alpha, std::abs(fit.theta_hat - alpha) < 0.1);
  }
  rep.curves.push_back(std::move(table));
  return rep;
}

// --- Capacitary regime: total energy bound and fractional seminorm ----------
//
// For a density with exponent alpha < p the gradient has full L^p energy; the
// energy bound's fitted constant must be stable under mass scaling, and the
// Gagliardo seminorm at the capacitary order stays refinement-stable.
inline ExperimentReport exp_capacitary(Index finest = 513, double alpha = 0.5,
                                       double p = 2.0) {
  ExperimentReport rep;
  rep.id = "capacitary";
  const int n = 2;
  if (!(alpha < p)) throw std::domain_error("capacitary: need alpha < p");
  const ExponentContext ctx{n, p, alpha};
  if (classify_regime(ctx) != Regime::Capacitary)
    throw std::domain_error("capacitary: configuration must classify as capacitary");
  // fractional order from the capacitary differentiability exponent
  // theta - q (theta - 1)/(p - 1) at q = p, backed off by eps = 0.1
  const double sigma_p = alpha - p * (alpha - 1.0) / (p - 1.0);
  const double a_frac = (sigma_p - 0.1) / p;

  const auto ns = detail::node_ladder(finest, 2);
  const int k = 16;
  std::vector<double> lp_vals, gag_vals;
  double c_fit = 0.0, h_fine = 0.0;
  GridPtr g_coarse;
  for (Index nn : ns) {
    auto g = make_ball_grid(n, nn, 1.0);
    ProblemSpec spec;
    spec.grid = g;
    spec.p = p;
    spec.mu = radial_singular_density(alpha, g);
    auto sol = solve_regularized(spec, k);
    const auto du = gradient(sol.u);
    lp_vals.push_back(lq_norm(du, p));
    gag_vals.push_back(
        gagliardo_seminorm(du, a_frac, p, Region::in_ball(Eigen::Vector3d::Zero(), 0.5)));
    const auto fit = measure_density_fit(spec.mu);
    const double tv = total_variation(spec.mu);
    c_fit = std::pow(lp_vals.back(), p) /
            (std::pow(fit.M_hat, 1.0 / (p - 1.0)) * tv +
             std::pow(sol.report.s_k, p) * g->measure());
    h_fine = g->h;
    if (!g_coarse) g_coarse = g;
  }
  const double lp_stab = lp_vals[1] / lp_vals[0];
  rep.row("lp_norm_stability", h_fine, lp_stab, 1.0, detail::within(lp_stab, 1.0, 0.10));
  const double gag_stab = gag_vals[1] / gag_vals[0];
  rep.row("gagliardo_stability", h_fine, gag_stab, 1.0, detail::within(gag_stab, 1.0, 0.15));

  // energy-bound constant under doubling of the measure mass (coarse grid)
  {
    ProblemSpec spec;
    spec.grid = g_coarse;
    spec.p = p;
    spec.mu = radial_singular_density(alpha, g_coarse);
    for (auto& a : spec.mu.atoms) a.w *= 2.0;
    if (spec.mu.density) spec.mu.density->v *= 2.0;
    auto sol = solve_regularized(spec, k);
    const auto du = gradient(sol.u);
    const auto fit = measure_density_fit(spec.mu);
    const double tv = total_variation(spec.mu);
    const double c2 = std::pow(lq_norm(du, p), p) /
                      (std::pow(fit.M_hat, 1.0 / (p - 1.0)) * tv +
                       std::pow(sol.report.s_k, p) * g_coarse->measure());
    // compare against the same-grid constant
    ProblemSpec spec1;
    spec1.grid = g_coarse;
    spec1.p = p;
    spec1.mu = radial_singular_density(alpha, g_coarse);
    auto sol1 = solve_regularized(spec1, k);
    const auto fit1 = measure_density_fit(spec1.mu);
    const double c1 = std::pow(lq_norm(gradient(sol1.u), p), p) /
                      (std::pow(fit1.M_hat, 1.0 / (p - 1.0)) * total_variation(spec1.mu) +
                       std::pow(sol1.report.s_k, p) * g_coarse->measure());
    const double cr = std::max(c1, c2) / std::min(c1, c2);
    rep.row("constant_mass_scaling", g_coarse->h, cr, 1.0, cr < 2.0);
  }
  rep.row("fitted_constant", h_fine, c_fit, c_fit, c_fit > 0.0);
  Curve lp{"lp-norm-vs-h", "h", "Lp norm of Du", {}};
  for (std::size_t i = 0; i < ns.size(); ++i)
    lp.points.emplace_back(2.0 / static_cast<double>(ns[i] - 1), lp_vals[i]);
  rep.curves.push_back(std::move(lp));
  return rep;
}

// --- BMO at the limit exponent theta = p ------------------------------------
//
// The logarithmic solution sits in BMO but not VMO: its discrete BMO seminorm
// must be refinement-stable and match the SOLA solution's, while the VMO
// modulus plateaus above a positive floor instead of vanishing.
inline ExperimentReport exp_bmo_limit(Index finest = 513) {
  ExperimentReport rep;
  rep.id = "bmo-limit";
  const auto gf = make_green(2, 2.0);
  const Region inner = Region::in_ball(Eigen::Vector3d::Zero(), 0.5);
  const auto ns = detail::node_ladder(finest, 3);
  std::vector<double> bmo_sola, bmo_exact;
  Curve stab{"bmo-vs-h", "h", "BMO seminorm", {}};
  double h_fine = 0.0;
  GridPtr g_fine;
  for (Index nn : ns) {
    auto g = make_ball_grid(2, nn, 1.0);
    auto sol = detail::sola_dirac(g, 2.0, 16);
    const auto exact = sample_green_value(gf, g);
    bmo_sola.push_back(bmo_seminorm(sol.u, inner));
    bmo_exact.push_back(bmo_seminorm(exact, inner));
    stab.points.emplace_back(g->h, bmo_sola.back());
    h_fine = g->h;
    g_fine = g;
  }
  for (std::size_t i = 0; i + 1 < bmo_sola.size(); ++i) {
    const double r = bmo_sola[i + 1] / bmo_sola[i];
    rep.row("bmo_stability", 2.0 / static_cast<double>(ns[i + 1] - 1), r, 1.0,
            detail::within(r, 1.0, 0.10));
  }
  const double agree = bmo_sola.back() / bmo_exact.back();
  rep.row("bmo_matches_exact", h_fine, agree, 1.0, detail::within(agree, 1.0, 0.10));

  // VMO modulus of the exact solution: must NOT vanish (atomic measure)
  const auto exact_fine = sample_green_value(gf, g_fine);
  Curve vmo{"vmo-modulus", "R", "oscillation modulus", {}};
  double floor_seen = 1e300;
  for (double R : {0.25, 0.125, 0.0625}) {
    const double w = vmo_modulus(exact_fine, R, inner);
    vmo.points.emplace_back(R, w);
    floor_seen = std::min(floor_seen, w);
  }
  rep.row("vmo_plateau_floor", h_fine, floor_seen, 0.04, floor_seen >= 0.04);
  rep.curves.push_back(std::move(stab));
  rep.curves.push_back(std::move(vmo));
  return rep;
}

// --- Local fractional estimate: bounded implied constant --------------------
//
// Evaluates both sides of the localized seminorm estimate on shrinking balls
// for the Dirac configuration and reports the minimal constant c(R) making it
// hold; c(R) must stay within a factor 10 across R, and must grow as the
// order approaches the sharp threshold.
inline ExperimentReport exp_local_estimate(Index finest = 257) {
  ExperimentReport rep;
  rep.id = "local-estimate";
  auto g = make_ball_grid(2, finest, 1.0);
  auto sol = detail::sola_dirac(g, 2.0, 32);
  const auto du = gradient(sol.u);
  const double s_k = sol.report.s_k;
  const double q = 1.0;
  const double sigma1 = sigma_q(2, 2.0, q);  // = 1

  const std::vector<double> radii = {0.4, 0.2, 0.1};
  const auto c_of = [&](double R, double sigma) {
    const Region half = Region::in_ball(Eigen::Vector3d::Zero(), 0.5 * R);
    const Region full = Region::in_ball(Eigen::Vector3d::Zero(), R);
    const double lhs = gagliardo_seminorm(du, sigma / q, q, half);  // q-th power for q = 1
    const double grad_term = lq_norm(du, q, full);
    double set = 0.0;
    for (Index i = 0; i < g->size(); ++i)
      if (g->masked(i) && full.contains(g->pos(i))) set += g->cell_volume();
    const double rhs1 = std::pow(R, -sigma) * (grad_term + std::pow(s_k, q) * set);
    const double rhs2 = std::pow(R, sigma1 - sigma);  // unit Dirac: |mu|(B_R) = 1
    return lhs / (rhs1 + rhs2);
  };

  Curve cs{"constant-vs-R", "R", "c(R)", {}};
  double cmin = 1e300, cmax = 0.0;
  for (double R : radii) {
    const double c = c_of(R, 0.5);
    cs.points.emplace_back(R, c);
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
    rep.row("c_at_R_" + detail::name_num(R), g->h, c, 0.0, c > 0.0);
  }
  rep.row("constant_spread", g->h, cmax / cmin, 1.0, cmax / cmin <= 10.0);
  // sharper order => larger constant (blow-up trend toward sigma(q))
  const double c_mid = c_of(0.2, 0.5), c_high = c_of(0.2, 0.9);
  rep.row("order_blowup_trend", g->h, c_high / c_mid, 1.0, c_high > c_mid);
  rep.curves.push_back(std::move(cs));
  return rep;
}

// ------------------------------------------------------------ registry -----

inline const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "marcinkiewicz-sharpness", "fractional-differentiability", "comparison-decay",
      "morrey-density",          "capacitary",                   "bmo-limit",
      "local-estimate"};
  return ids;
}

// resolution = 0 keeps each experiment's default finest grid.
inline ExperimentReport run_experiment(const std::string& id, Index resolution = 0) {
  const auto pick = [&](Index dflt) { return resolution > 0 ? resolution : dflt; };
  if (id == "marcinkiewicz-sharpness") return exp_marcinkiewicz_sharpness(pick(513));
  if (id == "fractional-differentiability")
    return exp_fractional_differentiability(pick(513));
  if (id == "comparison-decay") return exp_comparison_decay(pick(257));
  if (id == "morrey-density") return exp_morrey_density(pick(257));
  if (id == "capacitary") return exp_capacitary(pick(513));
  if (id == "bmo-limit") return exp_bmo_limit(pick(513));
  if (id == "local-estimate") return exp_local_estimate(pick(257));
  std::string known;
  for (const auto& k : experiment_ids()) known += " " + k;
  throw std::invalid_argument("unknown experiment '" + id + "'; known:" + known);
}

// ------------------------------------------------------------- output ------

inline std::string report_csv(const ExperimentReport& rep) {
  std::string out = "experiment,h,parameter,computed,expected,pass\n";
  for (const auto& r : rep.rows) {
    out += rep.id + "," + fmt_g(r.h) + "," + r.parameter + "," + fmt_g(r.computed) + "," +
           fmt_g(r.expected) + "," + (r.pass ? "1" : "0") + "\n";
  }
  return out;
}

inline void write_report(const ExperimentReport& rep, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/" + rep.id + ".csv");
    if (!out) throw std::runtime_error("cannot write report CSV in " + dir);
    out << report_csv(rep);
  }
  for (const auto& c : rep.curves) {
    std::ofstream out(dir + "/" + rep.id + "-" + c.name + ".dat");
    if (!out) throw std::runtime_error("cannot write curve data in " + dir);
    out << "# " << c.xlabel << " " << c.ylabel << "\n";
    for (const auto& [x, y] : c.points) out << fmt_g(x) << " " << fmt_g(y) << "\n";
  }
}

}  // namespace mdlab
