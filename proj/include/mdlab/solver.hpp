#pragma once

// Dirichlet solver for  -div( c(x) (s^2 + |Du|^2)^((p-2)/2) Du ) = f  on the
// masked region of a grid, u = g on the discrete boundary.  The discretization
// is the forward-difference energy
//
//   J(u) = sum_cells c_j (s^2 + |z_j|^2)^(p/2) / p * h^n  -  sum_i f_i u_i h^n,
//
// with z_j the forward gradient anchored at cell j.  Minimizing J with damped
// Newton steps (exact sparse Hessian, LDLT) gives the discrete solution; the
// gradient of J is exactly the backward divergence of the cell fluxes, so the
// first-order condition is a conservative finite-volume scheme.

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mdlab/grid.hpp"
#include "mdlab/measure.hpp"
#include "mdlab/mollify.hpp"

namespace mdlab {

struct ProblemSpec {
  GridPtr grid;
  double p = 2.0;
  double s = 0.0;
  double nu = 1.0;  // coefficient bounds nu <= c(x) <= L (checked when coeff given)
  double L = 1.0;
  std::optional<GridFunction> coeff;
  DiscreteMeasure mu;
};

struct SolveReport {
  int k = 0;          // mollification index (0 when f was supplied directly)
  double s_k = 0.0;   // regularization actually used
  int iterations = 0;
  int backtracks = 0;
  double energy = 0.0;
  double residual = 0.0;  // max-norm of the energy gradient over free nodes
  bool converged = false;
};

struct Solution {
  GridFunction u;
  SolveReport report;
};

namespace detail {

// Index structure of one Dirichlet problem: which nodes are free unknowns,
// which are pinned (boundary data), and which forward cells carry energy.
struct Stencil {
  GridPtr grid;
  std::vector<std::uint8_t> in_domain;
  std::vector<Index> cells;        // anchor node of each cell with all corners in domain
  std::vector<int> free_id;        // node -> dof id, or -1
  std::vector<Index> free_nodes;   // dof id -> node
  std::array<Index, 3> stride = {0, 0, 0};
};

inline Stencil make_stencil(GridPtr grid, const std::function<bool(Index)>& domain) {
  Stencil st;
  st.grid = grid;
  const Grid& g = *grid;
  st.stride = {1, g.ext[0], g.ext[0] * g.ext[1]};
  st.in_domain.assign(static_cast<std::size_t>(g.size()), 0);
  for (Index i = 0; i < g.size(); ++i) st.in_domain[i] = domain(i) ? 1 : 0;

  st.free_id.assign(static_cast<std::size_t>(g.size()), -1);
  for (Index iz = 0; iz < g.ext[2]; ++iz)
    for (Index iy = 0; iy < g.ext[1]; ++iy)
      for (Index ix = 0; ix < g.ext[0]; ++ix) {
        const Index i = g.index(ix, iy, iz);
        if (!st.in_domain[i]) continue;
        const std::array<Index, 3> c = {ix, iy, iz};
        bool interior = true;
        for (int d = 0; d < g.dim && interior; ++d) {
          if (c[d] == 0 || c[d] == g.ext[d] - 1)
            interior = false;
          else
            interior = st.in_domain[i - st.stride[d]] && st.in_domain[i + st.stride[d]];
        }
        if (interior) {
          st.free_id[i] = static_cast<int>(st.free_nodes.size());
          st.free_nodes.push_back(i);
        }
      }

  for (Index iz = 0; iz < g.ext[2]; ++iz)
    for (Index iy = 0; iy < g.ext[1]; ++iy)
      for (Index ix = 0; ix < g.ext[0]; ++ix) {
        const Index i = g.index(ix, iy, iz);
        if (!st.in_domain[i]) continue;
        const std::array<Index, 3> c = {ix, iy, iz};
        bool ok = true;
        for (int d = 0; d < g.dim && ok; ++d)
          ok = (c[d] + 1 < g.ext[d]) && st.in_domain[i + st.stride[d]];
        if (ok) st.cells.push_back(i);
      }
  if (st.free_nodes.empty()) throw std::domain_error("solver: no free nodes in domain");
  return st;
}

struct EnergyModel {
  double p, s2;
  const Eigen::ArrayXd* coeff;  // per-node cell coefficient, or null for 1

  double cell_coeff(Index j) const { return coeff ? (*coeff)[j] : 1.0; }
};

// Energy and (optionally) gradient of J at u.  grad must be pre-sized to the
// free dof count and is overwritten.
inline double energy_and_gradient(const Stencil& st, const EnergyModel& em,
                                  const Eigen::ArrayXd& u, const Eigen::ArrayXd& f,
                                  Eigen::VectorXd* grad) {
  const Grid& g = *st.grid;
  const int dim = g.dim;
  const double hn = g.cell_volume();
  const double inv_h = 1.0 / g.h;
  if (grad) grad->setZero();
  double energy = 0.0;
  for (Index j : st.cells) {
    Eigen::Vector3d z = Eigen::Vector3d::Zero();
    for (int d = 0; d < dim; ++d) z[d] = (u[j + st.stride[d]] - u[j]) * inv_h;
    const double m = em.s2 + z.squaredNorm();
    const double cj = em.cell_coeff(j);
    energy += cj * std::pow(m, 0.5 * em.p) / em.p * hn;
    if (grad) {
      const double w = cj * std::pow(m, 0.5 * em.p - 1.0) * hn * inv_h;  // d/dz of density
      for (int d = 0; d < dim; ++d) {
        const double fd = w * z[d];
        const Index nb = j + st.stride[d];
        if (st.free_id[j] >= 0) (*grad)[st.free_id[j]] -= fd;
        if (st.free_id[nb] >= 0) (*grad)[st.free_id[nb]] += fd;
      }
    }
  }
  for (std::size_t a = 0; a < st.free_nodes.size(); ++a) {
    const Index i = st.free_nodes[a];
    energy -= f[i] * u[i] * hn;
    if (grad) (*grad)[static_cast<Eigen::Index>(a)] -= f[i] * hn;
  }
  return energy;
}

inline void assemble_hessian(const Stencil& st, const EnergyModel& em, const Eigen::ArrayXd& u,
                             Eigen::SparseMatrix<double>& H) {
  const Grid& g = *st.grid;
  const int dim = g.dim;
  const double hn = g.cell_volume();
  const double inv_h = 1.0 / g.h;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(st.cells.size() * (dim + 1) * (dim + 1));
  for (Index j : st.cells) {
    Eigen::Vector3d z = Eigen::Vector3d::Zero();
    for (int d = 0; d < dim; ++d) z[d] = (u[j + st.stride[d]] - u[j]) * inv_h;
    const double m = em.s2 + z.squaredNorm();
    const double cj = em.cell_coeff(j);
    const double a0 = cj * std::pow(m, 0.5 * em.p - 1.0);
    // At m = 0 (degenerate point, s = 0) the density's second derivative is 0
    // for p > 2; avoid 0 * inf from the negative power.
    const double a1 =
        (em.p == 2.0 || m == 0.0) ? 0.0 : cj * (em.p - 2.0) * std::pow(m, 0.5 * em.p - 2.0);
    // A = a0 I + a1 z z^T acting on z-space; chain through z = B u_cell / h.
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    for (int r = 0; r < dim; ++r) {
      A(r, r) = a0;
      for (int c = 0; c < dim; ++c) A(r, c) += a1 * z[r] * z[c];
    }
    // Cell dofs: local 0 is the anchor (coefficient -1 in every z component),
    // local 1..dim the forward neighbors (coefficient +1 in one component).
    std::array<int, 4> ids{};
    ids[0] = st.free_id[j];
    for (int d = 0; d < dim; ++d) ids[d + 1] = st.free_id[j + st.stride[d]];
    const double scale = hn * inv_h * inv_h;
    auto bcol = [&](int local, int r) -> double {
      if (local == 0) return -1.0;
      return (r == local - 1) ? 1.0 : 0.0;
    };
    for (int la = 0; la < dim + 1; ++la) {
      if (ids[la] < 0) continue;
      for (int lb = 0; lb < dim + 1; ++lb) {
        if (ids[lb] < 0) continue;
        double v = 0.0;
        for (int r = 0; r < dim; ++r)
          for (int c = 0; c < dim; ++c) v += bcol(la, r) * A(r, c) * bcol(lb, c);
        if (v != 0.0) trip.emplace_back(ids[la], ids[lb], v * scale);
      }
    }
  }
  const int nfree = static_cast<int>(st.free_nodes.size());
  H.resize(nfree, nfree);
  H.setFromTriplets(trip.begin(), trip.end());
}

inline SolveReport newton_minimize(const Stencil& st, const EnergyModel& em,
                                   const Eigen::ArrayXd& f, Eigen::ArrayXd& u,
                                   int max_iter, double tol_scale) {
  SolveReport rep;
  const double fmax = f.abs().maxCoeff();
  const double tol = tol_scale * (1.0 + fmax);
  Eigen::VectorXd grad(static_cast<Eigen::Index>(st.free_nodes.size()));
  Eigen::SparseMatrix<double> H;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  double J = energy_and_gradient(st, em, u, f, &grad);
  for (int it = 0; it < max_iter; ++it) {
    rep.iterations = it;
    rep.energy = J;
    rep.residual = grad.lpNorm<Eigen::Infinity>();
    if (rep.residual <= tol) {
      rep.converged = true;
      return rep;
    }
    assemble_hessian(st, em, u, H);
    ldlt.compute(H);
    Eigen::VectorXd d;
    double slope = 0.0;
    if (ldlt.info() == Eigen::Success) {
      d = ldlt.solve(-grad);
      slope = grad.dot(d);
    }
    if (ldlt.info() != Eigen::Success || !(slope < 0.0)) {
      d = -grad;  // fall back to steepest descent if the factorization degenerates
      slope = -grad.squaredNorm();
    }
    double t = 1.0;
    Eigen::ArrayXd trial = u;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t a = 0; a < st.free_nodes.size(); ++a)
        trial[st.free_nodes[a]] = u[st.free_nodes[a]] + t * d[static_cast<Eigen::Index>(a)];
      const double Jt = energy_and_gradient(st, em, trial, f, nullptr);
      if (Jt <= J + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
      ++rep.backtracks;
    }
    if (!accepted) {
      rep.energy = J;
      return rep;  // stalled line search: report non-convergence
    }
    u = trial;
    J = energy_and_gradient(st, em, u, f, &grad);
  }
  rep.iterations = max_iter;
  rep.energy = J;
  rep.residual = grad.lpNorm<Eigen::Infinity>();
  rep.converged = rep.residual <= tol;
  return rep;
}

inline Eigen::ArrayXd cell_coeff_array(const ProblemSpec& spec) {
  if (!spec.coeff) return {};
  if (spec.coeff->grid->size() != spec.grid->size())
    throw std::invalid_argument("solver: coefficient grid does not match");
  const auto& c = spec.coeff->v;
  if ((c < spec.nu - 1e-12).any() || (c > spec.L + 1e-12).any())
    throw std::domain_error("solver: coefficient violates [nu, L] bounds");
  return c;
}

}  // namespace detail

struct SolverOptions {
  int max_iter = 500;
  double tol_scale = 1e-10;          // residual tolerance = tol_scale * (1 + max|f|)
  bool warm_start_quadratic = true;  // seed p > 2 solves with the p = 2 solution
};

// Solve the regularized problem with data f and regularization s_k directly.
inline Solution solve_with_data(const ProblemSpec& spec, const GridFunction& f, double s_k,
                                const SolverOptions& opt = {},
                                const GridFunction* initial = nullptr) {
  if (spec.p < 2.0) throw std::domain_error("solver: p >= 2 required");
  if (f.grid->size() != spec.grid->size())
    throw std::invalid_argument("solver: data grid does not match");
  const Grid& g = *spec.grid;
  auto st = detail::make_stencil(spec.grid, [&](Index i) { return g.masked(i); });
  const Eigen::ArrayXd coeff = detail::cell_coeff_array(spec);
  detail::EnergyModel em{spec.p, s_k * s_k, spec.coeff ? &coeff : nullptr};

  Eigen::ArrayXd u = Eigen::ArrayXd::Zero(g.size());
  if (initial) {
    if (initial->grid->size() != g.size())
      throw std::invalid_argument("solver: initial guess grid does not match");
    u = initial->v;
    for (Index i = 0; i < g.size(); ++i)
      if (st.free_id[i] < 0) u[i] = 0.0;  // Dirichlet data is homogeneous here
  } else if (spec.p > 2.0 && opt.warm_start_quadratic) {
    detail::EnergyModel quad{2.0, s_k * s_k, em.coeff};
    detail::newton_minimize(st, quad, f.v, u, opt.max_iter, opt.tol_scale);
  }

  auto rep = detail::newton_minimize(st, em, f.v, u, opt.max_iter, opt.tol_scale);
  rep.s_k = s_k;
  return {GridFunction{spec.grid, std::move(u)}, rep};
}

// One step of the approximation scheme: mollify mu at index k, regularize the
// growth exponent by s_k = s + 1/k, and solve.
inline Solution solve_regularized(const ProblemSpec& spec, int k, const SolverOptions& opt = {},
                                  const GridFunction* initial = nullptr) {
  const GridFunction fk = mollify(spec.mu, k, spec.grid);
  auto sol = solve_with_data(spec, fk, spec.s + 1.0 / k, opt, initial);
  sol.report.k = k;
  return sol;
}

// Full approximating sequence, warm-starting each solve from the previous one.
inline std::vector<Solution> sola_sequence(const ProblemSpec& spec, const std::vector<int>& ks,
                                           const SolverOptions& opt = {}) {
  std::vector<Solution> out;
  out.reserve(ks.size());
  const GridFunction* prev = nullptr;
  for (int k : ks) {
    out.push_back(solve_regularized(spec, k, opt, prev));
    prev = &out.back().u;
  }
  return out;
}

// Solve the homogeneous equation on a ball with boundary values taken from an
// existing grid function (comparison problems).  The trace is imposed on every
// in-ball node that is not surrounded by in-ball neighbors.
inline Solution solve_homogeneous_on_ball(const ProblemSpec& spec, const Ball& ball,
                                          const GridFunction& trace, double s_k,
                                          const SolverOptions& opt = {}) {
  if (spec.p < 2.0) throw std::domain_error("solver: p >= 2 required");
  if (trace.grid->size() != spec.grid->size())
    throw std::invalid_argument("solver: trace grid does not match");
  const Grid& g = *spec.grid;
  auto st = detail::make_stencil(
      spec.grid, [&](Index i) { return g.masked(i) && ball.contains(g.pos(i)); });
  const Eigen::ArrayXd coeff = detail::cell_coeff_array(spec);
  detail::EnergyModel em{spec.p, s_k * s_k, spec.coeff ? &coeff : nullptr};

  Eigen::ArrayXd u = trace.v;  // pinned nodes keep the trace, free nodes start from it
  const Eigen::ArrayXd zero = Eigen::ArrayXd::Zero(g.size());
  auto rep = detail::newton_minimize(st, em, zero, u, opt.max_iter, opt.tol_scale);
  rep.s_k = s_k;
  return {GridFunction{spec.grid, std::move(u)}, rep};
}

// Energy of a candidate over the cells of a ball stencil, for comparison-map
// inequalities (same trace => the solver's output must not lose).
inline double dirichlet_energy_on_ball(const ProblemSpec& spec, const Ball& ball,
                                       const GridFunction& v, double s_k) {
  const Grid& g = *spec.grid;
  auto st = detail::make_stencil(
      spec.grid, [&](Index i) { return g.masked(i) && ball.contains(g.pos(i)); });
  const Eigen::ArrayXd coeff = detail::cell_coeff_array(spec);
  detail::EnergyModel em{spec.p, s_k * s_k, spec.coeff ? &coeff : nullptr};
  return detail::energy_and_gradient(st, em, v.v, Eigen::ArrayXd::Zero(g.size()), nullptr);
}

struct TruncationCheck {
  double lhs = 0.0;  // integral of |Du|^p over {|u| <= level}
  double rhs = 0.0;  // level * |mu|(domain) + s^p * |{|u| <= level}|
  bool holds = false;
};

// The basic truncation energy estimate, evaluated discretely: gradients by
// central differences, the sublevel set by node membership.
inline TruncationCheck truncation_energy_check(const GridFunction& u, const GridFunction& f,
                                               double level, double p, double s) {
  const Grid& g = *u.grid;
  const auto du = gradient(u);
  double lhs = 0.0, set_measure = 0.0, mass = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    if (!g.masked(i)) continue;
    mass += std::abs(f.v[i]) * g.cell_volume();
    if (std::abs(u.v[i]) <= level) {
      lhs += std::pow(du.v.row(i).norm(), p) * g.cell_volume();
      set_measure += g.cell_volume();
    }
  }
  TruncationCheck tc;
  tc.lhs = lhs;
  tc.rhs = level * mass + std::pow(s, p) * set_measure;
  tc.holds = tc.lhs <= tc.rhs;
  return tc;
}

}  // namespace mdlab
