#pragma once

// Radial fundamental solutions of the p-Laplacian on the unit ball with a unit
// point charge at the origin, zero on the boundary.  These are the exact
// references the estimators are checked against: values, gradients, level-set
// measures of |Du|, and annulus integrals are all closed-form.

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

#include "mdlab/grid.hpp"
#include "mdlab/measure.hpp"

namespace mdlab {

inline double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

inline double unit_sphere_area(int n) {  // surface measure of S^(n-1)
  return n * unit_ball_volume(n);
}

struct GreenFunction {
  int n = 2;
  double p = 2.0;
  double c = 0.0;  // amplitude fixed by unit flux through spheres

  // |Du|(r) = K r^(-(n-1)/(p-1)); grad_exponent is that (positive) exponent.
  double grad_amplitude() const {
    return p < n ? c * (n - p) / (p - 1.0) : c;
  }
  double grad_exponent() const { return (n - 1.0) / (p - 1.0); }
  bool log_branch() const { return p == n; }
};

inline GreenFunction make_green(int n, double p) {
  if (n < 2) throw std::domain_error("make_green: n >= 2 required");
  if (p < 2.0 || p > n) throw std::domain_error("make_green: 2 <= p <= n required");
  GreenFunction g;
  g.n = n;
  g.p = p;
  const double flux = std::pow(unit_sphere_area(n), -1.0 / (p - 1.0));
  if (p < n)
    g.c = (p - 1.0) / (n - p) * flux;
  else
    g.c = flux;
  return g;
}

inline double green_value(const GreenFunction& g, double r) {
  if (r <= 0.0) throw std::domain_error("green_value: r > 0 required");
  if (g.log_branch()) return g.c * std::log(1.0 / r);
  return g.c * (std::pow(r, -(g.n - g.p) / (g.p - 1.0)) - 1.0);
}

inline double green_gradient_magnitude(const GreenFunction& g, double r) {
  if (r <= 0.0) throw std::domain_error("green_gradient_magnitude: r > 0 required");
  return g.grad_amplitude() * std::pow(r, -g.grad_exponent());
}

inline Eigen::Vector3d green_gradient(const GreenFunction& g, const Eigen::Vector3d& x) {
  const double r = x.norm();
  if (r <= 0.0) throw std::domain_error("green_gradient: x != 0 required");
  return -(green_gradient_magnitude(g, r) / r) * x;
}

// Lebesgue measure of { |Du| > lambda } inside the unit ball.
inline double green_levelset_measure(const GreenFunction& g, double lambda) {
  if (lambda <= 0.0) throw std::domain_error("green_levelset_measure: lambda > 0 required");
  const double r = std::pow(g.grad_amplitude() / lambda, (g.p - 1.0) / (g.n - 1.0));
  return unit_ball_volume(g.n) * std::pow(std::min(r, 1.0), g.n);
}

// sup over lambda of lambda^b |{|Du| > lambda}| with b = n(p-1)/(n-1); the sup
// is attained for every lambda above the boundary gradient value.
inline double green_weak_sup(const GreenFunction& g) {
  const double b = g.n * (g.p - 1.0) / (g.n - 1.0);
  return unit_ball_volume(g.n) * std::pow(g.grad_amplitude(), b);
}

// Exact integral of |Du|^t over the annulus rho < |x| < 1.
inline double green_annulus_integral(const GreenFunction& g, double t, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("green_annulus_integral: rho in (0,1)");
  if (t <= 0.0) throw std::domain_error("green_annulus_integral: t > 0 required");
  const double K = g.grad_amplitude();
  const double e = (g.n - 1.0) - t * g.grad_exponent();  // radial power after r^(n-1)
  const double area = unit_sphere_area(g.n);
  if (std::abs(e + 1.0) < 1e-14) return std::pow(K, t) * area * std::log(1.0 / rho);
  return std::pow(K, t) * area * (1.0 - std::pow(rho, e + 1.0)) / (e + 1.0);
}

namespace detail {

// Radius of the ball with the same volume as one grid cell: the node at the
// origin represents a cell average, and radial integrands are integrated
// exactly over that equivalent ball.
inline double equal_volume_radius(const Grid& g) {
  return g.h * std::pow(unit_ball_volume(g.dim), -1.0 / g.dim);
}

// Cell average over B_rc of A r^(-a) for a < n.
inline double radial_cell_average(int n, double A, double a, double rc, double hn) {
  const double area = unit_sphere_area(n);
  return A * area * std::pow(rc, n - a) / ((n - a) * hn);
}

}  // namespace detail

inline GridFunction sample_green_value(const GreenFunction& g, GridPtr grid) {
  if (grid->dim != g.n) throw std::invalid_argument("sample_green_value: dimension mismatch");
  GridFunction out{grid, Eigen::ArrayXd::Zero(grid->size())};
  const double rc = detail::equal_volume_radius(*grid);
  const double hn = grid->cell_volume();
  for (Index i = 0; i < grid->size(); ++i) {
    const double r = grid->pos(i).norm();
    if (r > 0.0) {
      out.v[i] = green_value(g, r);
    } else if (g.log_branch()) {
      const double area = unit_sphere_area(g.n);
      out.v[i] = g.c * area * std::pow(rc, g.n) * (std::log(1.0 / rc) + 1.0 / g.n) / (g.n * hn);
    } else {
      const double beta = (g.n - g.p) / (g.p - 1.0);
      out.v[i] = detail::radial_cell_average(g.n, g.c, beta, rc, hn) - g.c;
    }
  }
  return out;
}

inline GridFunction sample_green_gradient_magnitude(const GreenFunction& g, GridPtr grid) {
  if (grid->dim != g.n)
    throw std::invalid_argument("sample_green_gradient_magnitude: dimension mismatch");
  GridFunction out{grid, Eigen::ArrayXd::Zero(grid->size())};
  const double rc = detail::equal_volume_radius(*grid);
  const double hn = grid->cell_volume();
  for (Index i = 0; i < grid->size(); ++i) {
    const double r = grid->pos(i).norm();
    out.v[i] = (r > 0.0)
                   ? green_gradient_magnitude(g, r)
                   : detail::radial_cell_average(g.n, g.grad_amplitude(), g.grad_exponent(), rc, hn);
  }
  return out;
}

inline GridVectorField sample_green_gradient(const GreenFunction& g, GridPtr grid) {
  if (grid->dim != g.n)
    throw std::invalid_argument("sample_green_gradient: dimension mismatch");
  GridVectorField out{grid, Eigen::MatrixXd::Zero(grid->size(), grid->dim)};
  for (Index i = 0; i < grid->size(); ++i) {
    const Eigen::Vector3d x = grid->pos(i);
    if (x.norm() > 0.0) out.v.row(i) = green_gradient(g, x).head(grid->dim).transpose();
  }
  return out;
}

// Density |x|^(-alpha) sampled on a grid; the origin node again carries the
// exact cell average so that discrete masses of small balls stay faithful.
inline DiscreteMeasure radial_singular_density(double alpha, GridPtr grid) {
  if (!(alpha > 0.0 && alpha < grid->dim))
    throw std::domain_error("radial_singular_density: 0 < alpha < n required");
  GridFunction f{grid, Eigen::ArrayXd::Zero(grid->size())};
  const double rc = detail::equal_volume_radius(*grid);
  const double hn = grid->cell_volume();
  for (Index i = 0; i < grid->size(); ++i) {
    const double r = grid->pos(i).norm();
    f.v[i] = (r > 0.0) ? std::pow(r, -alpha)
                       : detail::radial_cell_average(grid->dim, 1.0, alpha, rc, hn);
  }
  DiscreteMeasure mu;
  mu.dim = grid->dim;
  mu.density = std::move(f);
  return mu;
}

}  // namespace mdlab
