#pragma once

// Measures as data: finitely many weighted atoms plus an optional absolutely
// continuous part sampled on a grid.  |mu| always means total variation.

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mdlab/grid.hpp"
#include "mdlab/norms.hpp"

namespace mdlab {

struct Atom {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  double w = 0.0;
};

struct DiscreteMeasure {
  int dim = 2;
  std::vector<Atom> atoms;
  std::optional<GridFunction> density;
};

inline DiscreteMeasure make_dirac(const Eigen::Vector3d& x, double w = 1.0, int dim = 2) {
  DiscreteMeasure mu;
  mu.dim = dim;
  mu.atoms.push_back({x, w});
  return mu;
}

inline double total_variation(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (const auto& a : mu.atoms) s += std::abs(a.w);
  if (mu.density) {
    const Grid& g = *mu.density->grid;
    for (Index i = 0; i < g.size(); ++i)
      if (g.masked(i)) s += std::abs(mu.density->v[i]) * g.cell_volume();
  }
  return s;
}

inline double ball_mass(const DiscreteMeasure& mu, const Ball& b) {
  double s = 0.0;
  for (const auto& a : mu.atoms)
    if (b.contains(a.x)) s += std::abs(a.w);
  if (mu.density) {
    const Grid& g = *mu.density->grid;
    const auto& v = mu.density->v;
    detail::for_ball_rows(g, b, [&](Index row, Index i0, Index i1) {
      const Index base = row * g.ext[0];
      for (Index i = i0; i <= i1; ++i)
        if (g.masked(base + i)) s += std::abs(v[base + i]);
    });
    s *= g.cell_volume();
  }
  return s;
}

struct DensityFit {
  double theta_hat = 0.0;  // fitted density order: |mu|(B_R) <~ M R^(n - theta)
  double M_hat = 0.0;      // minimal constant making the bound hold on the sample
  Eigen::Vector3d worst_center = Eigen::Vector3d::Zero();
};

// Fits theta from log |mu|(B_R(c)) vs log R over dyadic radii; the reported
// theta is the worst (largest) over sampled centers, M the smallest constant
// covering every sampled ball at that theta.
inline DensityFit measure_density_fit(const DiscreteMeasure& mu) {
  const int n = mu.density ? mu.density->grid->dim : mu.dim;
  std::vector<Eigen::Vector3d> centers;
  for (const auto& a : mu.atoms) centers.push_back(a.x);
  if (mu.density) centers.push_back(mu.density->grid->center());
  if (centers.empty()) throw std::domain_error("measure_density_fit: empty measure");

  const double rmin = mu.density ? 4.0 * mu.density->grid->h : std::pow(2.0, -8);
  std::vector<double> radii;
  for (double R = 1.0; R >= rmin - 1e-15; R *= 0.5) radii.push_back(R);
  if (radii.size() < 2) throw std::domain_error("measure_density_fit: fewer than 2 radii");

  DensityFit fit;
  bool fitted = false;
  std::vector<std::pair<double, double>> samples;  // (R, mass)
  for (const auto& c : centers) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (double R : radii) {
      const double mass = ball_mass(mu, {c, R});
      if (mass <= 0.0) continue;
      samples.emplace_back(R, mass);
      const double lx = std::log(R), ly = std::log(mass);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
      ++m;
    }
    if (m < 2) continue;
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double theta_c = static_cast<double>(n) - slope;
    if (!fitted || theta_c > fit.theta_hat) {
      fit.theta_hat = theta_c;
      fit.worst_center = c;
      fitted = true;
    }
  }
  if (!fitted)
    throw std::domain_error("measure_density_fit: no center saw positive mass");
  for (const auto& [R, mass] : samples)
    fit.M_hat = std::max(fit.M_hat, mass * std::pow(R, fit.theta_hat - n));
  return fit;
}

}  // namespace mdlab
