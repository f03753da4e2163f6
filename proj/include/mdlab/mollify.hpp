#pragma once

// Mollification of measures against the standard smooth bump, producing grid
// data whose lattice integral reproduces the measure exactly: the kernel is
// normalized against its own lattice sums, separately per atom, so no mass is
// lost to quadrature.

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mdlab/grid.hpp"
#include "mdlab/measure.hpp"

namespace mdlab {

// exp(-1/(1-|y|^2)) for |y| < 1, else 0 (unnormalized).
inline double bump_unnormalized(double rho2) {
  return rho2 < 1.0 ? std::exp(-1.0 / (1.0 - rho2)) : 0.0;
}

namespace detail {

struct KernelWindow {
  Index half = 0;                 // offsets run over [-half, half]^dim
  std::vector<double> weights;    // lattice-normalized, offset-major
  Index side() const { return 2 * half + 1; }
};

inline KernelWindow make_kernel_window(const Grid& g, int k) {
  const double radius = 1.0 / k;
  KernelWindow w;
  w.half = static_cast<Index>(std::floor(radius / g.h)) + 1;
  const Index side = w.side();
  Index count = 1;
  for (int d = 0; d < g.dim; ++d) count *= side;
  w.weights.assign(static_cast<std::size_t>(count), 0.0);
  double total = 0.0;
  const Index sy = (g.dim >= 2) ? side : 1;
  const Index sz = (g.dim >= 3) ? side : 1;
  for (Index oz = 0; oz < sz; ++oz)
    for (Index oy = 0; oy < sy; ++oy)
      for (Index ox = 0; ox < side; ++ox) {
        Eigen::Vector3d y = Eigen::Vector3d::Zero();
        y[0] = static_cast<double>(ox - w.half) * g.h * k;
        if (g.dim >= 2) y[1] = static_cast<double>(oy - w.half) * g.h * k;
        if (g.dim >= 3) y[2] = static_cast<double>(oz - w.half) * g.h * k;
        const double val = bump_unnormalized(y.squaredNorm());
        w.weights[static_cast<std::size_t>((oz * sy + oy) * side + ox)] = val;
        total += val;
      }
  if (total <= 0.0) throw std::domain_error("mollify: kernel window has no support");
  const double scale = 1.0 / (total * g.cell_volume());
  for (double& x : w.weights) x *= scale;
  return w;
}

}  // namespace detail

// f_k = mu * phi_k on the grid, phi_k supported in the ball of radius 1/k.
// Requires 1/k >= 2h so the discrete kernel resolves the bump.
inline GridFunction mollify(const DiscreteMeasure& mu, int k, GridPtr grid) {
  if (k < 1) throw std::domain_error("mollify: k >= 1 required");
  if (1.0 / k < 2.0 * grid->h - 1e-12)
    throw std::domain_error("mollify: mollification radius 1/k below 2h");
  if (mu.density && mu.density->grid->size() != grid->size())
    throw std::invalid_argument("mollify: density grid does not match target grid");

  GridFunction out{grid, Eigen::ArrayXd::Zero(grid->size())};
  const Grid& g = *grid;
  const double radius = 1.0 / k;

  // Atomic part: per-atom lattice normalization keeps each atom's mass exact.
  for (const auto& atom : mu.atoms) {
    struct Hit {
      Index idx;
      double val;
    };
    std::vector<Hit> hits;
    std::array<Index, 3> lo = {0, 0, 0}, hi = {0, 0, 0};
    for (int d = 0; d < g.dim; ++d) {
      lo[d] = std::max<Index>(0, static_cast<Index>(std::ceil((atom.x[d] - radius - g.origin[d]) / g.h)));
      hi[d] = std::min<Index>(g.ext[d] - 1,
                              static_cast<Index>(std::floor((atom.x[d] + radius - g.origin[d]) / g.h)));
    }
    double total = 0.0;
    for (Index iz = lo[2]; iz <= hi[2]; ++iz)
      for (Index iy = lo[1]; iy <= hi[1]; ++iy)
        for (Index ix = lo[0]; ix <= hi[0]; ++ix) {
          const Index idx = g.index(ix, iy, iz);
          const double rho2 = ((g.pos(idx) - atom.x) * k).squaredNorm();
          const double val = bump_unnormalized(rho2);
          if (val > 0.0) {
            hits.push_back({idx, val});
            total += val;
          }
        }
    if (total <= 0.0) throw std::domain_error("mollify: atom support misses the grid");
    const double scale = atom.w / (total * g.cell_volume());
    for (const auto& h : hits) out.v[h.idx] += h.val * scale;
  }

  // Absolutely continuous part: discrete convolution with one shared kernel.
  if (mu.density) {
    const auto w = detail::make_kernel_window(g, k);
    const auto& src = mu.density->v;
    const Index side = w.side();
    for (Index iz = 0; iz < g.ext[2]; ++iz)
      for (Index iy = 0; iy < g.ext[1]; ++iy)
        for (Index ix = 0; ix < g.ext[0]; ++ix) {
          const Index idx = g.index(ix, iy, iz);
          double acc = 0.0;
          const Index z0 = (g.dim >= 3) ? -w.half : 0, z1 = (g.dim >= 3) ? w.half : 0;
          const Index y0 = (g.dim >= 2) ? -w.half : 0, y1 = (g.dim >= 2) ? w.half : 0;
          for (Index oz = z0; oz <= z1; ++oz) {
            const Index jz = iz + oz;
            if (jz < 0 || jz >= g.ext[2]) continue;
            for (Index oy = y0; oy <= y1; ++oy) {
              const Index jy = iy + oy;
              if (jy < 0 || jy >= g.ext[1]) continue;
              const Index wbase = ((oz + ((g.dim >= 3) ? w.half : 0)) * ((g.dim >= 2) ? side : 1) +
                                   (oy + ((g.dim >= 2) ? w.half : 0))) *
                                  side;
              for (Index ox = -w.half; ox <= w.half; ++ox) {
                const Index jx = ix + ox;
                if (jx < 0 || jx >= g.ext[0]) continue;
                const Index j = g.index(jx, jy, jz);
                if (!g.masked(j)) continue;
                acc += src[j] * w.weights[static_cast<std::size_t>(wbase + ox + w.half)];
              }
            }
          }
          out.v[idx] += acc * g.cell_volume();
        }
  }
  return out;
}

}  // namespace mdlab
