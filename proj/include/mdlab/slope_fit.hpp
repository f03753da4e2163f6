#pragma once

// Least-squares slope on log-log data, used to read exponents off computed
// decay curves.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mdlab {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;     // fit is log y = slope * log x + intercept
  double max_residual = 0.0;  // max |log y - fit| over the data
  int points = 0;
};

inline SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  if (x.size() < 4) throw std::invalid_argument("fit_loglog: at least 4 points required");
  const std::size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::domain_error("fit_loglog: data must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  const double den = m * sxx - sx * sx;
  if (den <= 0.0) throw std::domain_error("fit_loglog: degenerate abscissae");
  SlopeFit fit;
  fit.points = static_cast<int>(m);
  fit.slope = (m * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / m;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::abs(std::log(y[i]) - (fit.slope * std::log(x[i]) + fit.intercept));
    fit.max_residual = std::max(fit.max_residual, r);
  }
  return fit;
}

}  // namespace mdlab
