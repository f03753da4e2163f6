#pragma once

// Function-space norm estimators on masked lattices: Lebesgue, Morrey,
// Gagliardo, Nikolski, Marcinkiewicz (weak Lebesgue), Marcinkiewicz-Morrey,
// BMO and VMO.  Integrals are midpoint sums (node value x h^n); suprema over
// balls run over a deterministic family (sub-lattice centers every 4th node,
// the domain center, optional extra centers; dyadic radii 2^-j with
// 4h <= R <= 1, only balls whose nodes are all masked and which fit in the
// requested region).  Level-set suprema use a 200-point logarithmic lambda
// grid anchored at the [0.5%, 99.5%] quantiles of the positive values, with
// counts taken as |g| >= lambda; anchoring at quantiles keeps the estimator
// scale-equivariant and immune to the O(1) lattice-counting noise right at a
// point singularity.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdlab/grid.hpp"
#include "mdlab/reduce.hpp"

namespace mdlab {

inline constexpr int kLevelGridPoints = 200;
inline constexpr double kLevelQuantileLo = 0.005;
inline constexpr double kLevelQuantileHi = 0.995;
inline constexpr int kBallCenterStride = 4;
inline constexpr int kBallMinRadiusCells = 4;

struct NormReport {
  std::string kind;
  double value = 0.0;
  std::optional<double> q, alpha, theta, t;
  double h = 0.0;
};

namespace detail {

// Per-row prefix sums over an arbitrary node weight; rows are contiguous
// x-runs.  sum(row, i0, i1) returns the inclusive range sum.
struct RowPrefix {
  Index nx = 0;
  std::vector<double> p;  // (nx+1) entries per row

  template <class W>
  static RowPrefix build(const Grid& g, W&& weight) {
    RowPrefix rp;
    rp.nx = g.ext[0];
    const Index nrows = g.ext[1] * g.ext[2];
    rp.p.assign(static_cast<std::size_t>(nrows * (rp.nx + 1)), 0.0);
    for (Index r = 0; r < nrows; ++r) {
      const Index base = r * rp.nx;
      double acc = 0.0;
      const std::size_t pb = static_cast<std::size_t>(r * (rp.nx + 1));
      for (Index i = 0; i < rp.nx; ++i) {
        acc += weight(base + i);
        rp.p[pb + static_cast<std::size_t>(i) + 1] = acc;
      }
    }
    return rp;
  }

  double sum(Index row, Index i0, Index i1) const {
    const std::size_t pb = static_cast<std::size_t>(row * (nx + 1));
    return p[pb + static_cast<std::size_t>(i1) + 1] - p[pb + static_cast<std::size_t>(i0)];
  }
};

// Calls fn(row, i0, i1) for every nonempty x-run of nodes strictly inside the
// ball.  Index bounds come from closed-form arithmetic, then get nudged so
// the exact squared-distance predicate is authoritative.
template <class F>
void for_ball_rows(const Grid& g, const Ball& b, F&& fn) {
  const double R2 = b.radius * b.radius;
  const auto pred = [&](Index i, Index j, Index k) {
    return (g.pos(i, j, k) - b.center).squaredNorm() < R2;
  };
  const Index k_lo = g.dim == 3
      ? std::max<Index>(0, static_cast<Index>(std::floor((b.center[2] - b.radius - g.origin[2]) / g.h)) - 1)
      : 0;
  const Index k_hi = g.dim == 3
      ? std::min<Index>(g.ext[2] - 1, static_cast<Index>(std::ceil((b.center[2] + b.radius - g.origin[2]) / g.h)) + 1)
      : 0;
  const Index j_lo = std::max<Index>(0, static_cast<Index>(std::floor((b.center[1] - b.radius - g.origin[1]) / g.h)) - 1);
  const Index j_hi = std::min<Index>(g.ext[1] - 1, static_cast<Index>(std::ceil((b.center[1] + b.radius - g.origin[1]) / g.h)) + 1);
  for (Index k = k_lo; k <= k_hi; ++k) {
    const double dz = g.dim == 3 ? g.origin[2] + g.h * static_cast<double>(k) - b.center[2] : 0.0;
    const double rem_k = R2 - dz * dz;
    if (rem_k <= 0.0) continue;
    for (Index j = j_lo; j <= j_hi; ++j) {
      const double dy = g.origin[1] + g.h * static_cast<double>(j) - b.center[1];
      const double rem = rem_k - dy * dy;
      if (rem <= 0.0) continue;
      const double d = std::sqrt(rem);
      Index i0 = static_cast<Index>(std::ceil((b.center[0] - d - g.origin[0]) / g.h));
      Index i1 = static_cast<Index>(std::floor((b.center[0] + d - g.origin[0]) / g.h));
      i0 = std::max<Index>(i0, 0);
      i1 = std::min<Index>(i1, g.ext[0] - 1);
      while (i0 > 0 && pred(i0 - 1, j, k)) --i0;
      while (i0 <= i1 && !pred(i0, j, k)) ++i0;
      while (i1 + 1 < g.ext[0] && pred(i1 + 1, j, k)) ++i1;
      while (i1 >= i0 && !pred(i1, j, k)) --i1;
      if (i0 > i1) continue;
      fn((k * g.ext[1] + j), i0, i1);
    }
  }
}

inline Index ball_node_count(const Grid& g, const Ball& b) {
  Index c = 0;
  for_ball_rows(g, b, [&](Index, Index i0, Index i1) { c += i1 - i0 + 1; });
  return c;
}

// True if the closed geometric ball fits inside the node bounding box.
inline bool ball_in_box(const Grid& g, const Ball& b) {
  for (int d = 0; d < g.dim; ++d) {
    const double lo = g.origin[d], hi = g.origin[d] + g.h * static_cast<double>(g.ext[d] - 1);
    if (b.center[d] - b.radius < lo - 1e-12 || b.center[d] + b.radius > hi + 1e-12)
      return false;
  }
  return true;
}

struct BallFamilyOptions {
  int stride = kBallCenterStride;
  int min_radius_cells = kBallMinRadiusCells;
  double max_radius = 1.0;
  std::vector<Eigen::Vector3d> extra_centers;
};

// Enumerates admissible balls (fully masked, inside the region, 4h <= R <= 1)
// in a fixed order: centers first (sub-lattice in index order, then domain
// center, then extras), radii descending.
template <class F>
void for_each_admissible_ball(const Grid& g, const Region& region,
                              const BallFamilyOptions& opts, const RowPrefix& maskpre,
                              F&& fn) {
  std::vector<Eigen::Vector3d> centers;
  const Index kmax = g.dim == 3 ? g.ext[2] : 1;
  for (Index k = 0; k < kmax; k += opts.stride)
    for (Index j = 0; j < g.ext[1]; j += opts.stride)
      for (Index i = 0; i < g.ext[0]; i += opts.stride) {
        const Index idx = g.index(i, j, k);
        if (g.masked(idx)) centers.push_back(g.pos(idx));
      }
  centers.push_back(g.center());
  centers.insert(centers.end(), opts.extra_centers.begin(), opts.extra_centers.end());
  std::vector<double> radii;
  for (double R = 1.0; R >= static_cast<double>(opts.min_radius_cells) * g.h - 1e-12; R *= 0.5)
    if (R <= opts.max_radius + 1e-12) radii.push_back(R);
  for (const auto& c : centers) {
    for (double R : radii) {
      Ball b{c, R};
      if (!region.contains_ball(b)) continue;
      if (!ball_in_box(g, b)) continue;
      Index total = 0;
      double masked = 0.0;
      for_ball_rows(g, b, [&](Index row, Index i0, Index i1) {
        total += i1 - i0 + 1;
        masked += maskpre.sum(row, i0, i1);
      });
      if (total == 0) continue;
      if (static_cast<double>(total) != masked) continue;  // sticks out of the mask
      fn(b);
    }
  }
}

inline RowPrefix mask_prefix(const Grid& g) {
  return RowPrefix::build(g, [&](Index idx) { return g.masked(idx) ? 1.0 : 0.0; });
}

inline double pow_q(double x, double q) {
  if (q == 1.0) return x;
  if (q == 2.0) return x * x;
  return std::pow(x, q);
}

}  // namespace detail

inline std::vector<Ball> sample_balls(const Grid& g, const Region& region,
                                      const std::vector<Eigen::Vector3d>& extra_centers = {},
                                      double max_radius = 1.0) {
  detail::BallFamilyOptions opts;
  opts.extra_centers = extra_centers;
  opts.max_radius = max_radius;
  const auto maskpre = detail::mask_prefix(g);
  std::vector<Ball> out;
  detail::for_each_admissible_ball(g, region, opts, maskpre,
                                   [&](const Ball& b) { out.push_back(b); });
  return out;
}

// ---------------------------------------------------------------- L^q -----

template <class S>
double lq_norm(const GridFunctionT<S>& f, double q, const Region& region = Region::all()) {
  if (!(q >= 1.0)) throw std::domain_error("lq_norm: q must be >= 1");
  const Grid& g = *f.grid;
  const double s = det_sum(g.size(), [&](Index i) {
    if (!g.masked(i) || !region.contains(g.pos(i))) return 0.0;
    return detail::pow_q(std::abs(static_cast<double>(f.v[i])), q);
  });
  return std::pow(s * g.cell_volume(), 1.0 / q);
}

template <class S>
double lq_norm(const GridVectorFieldT<S>& w, double q, const Region& region = Region::all()) {
  if (!(q >= 1.0)) throw std::domain_error("lq_norm: q must be >= 1");
  const Grid& g = *w.grid;
  const double s = det_sum(g.size(), [&](Index i) {
    if (!g.masked(i) || !region.contains(g.pos(i))) return 0.0;
    return detail::pow_q(w.v.row(i).norm(), q);
  });
  return std::pow(s * g.cell_volume(), 1.0 / q);
}

// -------------------------------------------------------------- Morrey ----

// ||w||_{L^{q,theta}}^q = sup_{B_R} R^(theta-n) Int_{B_R} |w|^q over the
// sampled admissible family.  Returns the q-th root; 0 if no ball fits.
template <class S>
double morrey_norm(const GridFunctionT<S>& f, double q, double theta,
                   const Region& region = Region::all(),
                   const std::vector<Eigen::Vector3d>& extra_centers = {}) {
  if (!(q >= 1.0)) throw std::domain_error("morrey_norm: q must be >= 1");
  const Grid& g = *f.grid;
  if (!(theta >= 0.0 && theta <= static_cast<double>(g.dim)))
    throw std::domain_error("morrey_norm: theta must lie in [0, n]");
  const auto maskpre = detail::mask_prefix(g);
  const auto wpre = detail::RowPrefix::build(g, [&](Index i) {
    return g.masked(i) ? detail::pow_q(std::abs(static_cast<double>(f.v[i])), q) : 0.0;
  });
  detail::BallFamilyOptions opts;
  opts.extra_centers = extra_centers;
  const double hn = g.cell_volume();
  double best = 0.0;
  detail::for_each_admissible_ball(g, region, opts, maskpre, [&](const Ball& b) {
    double s = 0.0;
    detail::for_ball_rows(g, b, [&](Index row, Index i0, Index i1) { s += wpre.sum(row, i0, i1); });
    best = std::max(best, std::pow(b.radius, theta - g.dim) * s * hn);
  });
  return std::pow(best, 1.0 / q);
}

template <class S>
double morrey_norm(const GridVectorFieldT<S>& w, double q, double theta,
                   const Region& region = Region::all(),
                   const std::vector<Eigen::Vector3d>& extra_centers = {}) {
  return morrey_norm(magnitude(w), q, theta, region, extra_centers);
}

// ----------------------------------------------------------- Gagliardo ----

namespace detail {

struct PairCloud {
  std::vector<std::int32_t> cx, cy, cz;     // lattice coords
  std::vector<double> s0, s1, s2;           // value components (s1,s2 unused for scalars)
  int comps = 1;
  std::int32_t bx = 0, by = 0, bz = 0;      // coord bounds (max - min)
};

template <class S>
PairCloud collect_cloud(const GridFunctionT<S>& f, const Region& region) {
  const Grid& g = *f.grid;
  PairCloud pc;
  pc.comps = 1;
  std::int32_t mnx = INT32_MAX, mny = INT32_MAX, mnz = INT32_MAX;
  std::int32_t mxx = INT32_MIN, mxy = INT32_MIN, mxz = INT32_MIN;
  for (Index i = 0; i < g.size(); ++i) {
    if (!g.masked(i) || !region.contains(g.pos(i))) continue;
    const auto c = g.coords(i);
    pc.cx.push_back(static_cast<std::int32_t>(c[0]));
    pc.cy.push_back(static_cast<std::int32_t>(c[1]));
    pc.cz.push_back(static_cast<std::int32_t>(c[2]));
    pc.s0.push_back(static_cast<double>(f.v[i]));
    mnx = std::min(mnx, pc.cx.back()); mxx = std::max(mxx, pc.cx.back());
    mny = std::min(mny, pc.cy.back()); mxy = std::max(mxy, pc.cy.back());
    mnz = std::min(mnz, pc.cz.back()); mxz = std::max(mxz, pc.cz.back());
  }
  if (!pc.cx.empty()) { pc.bx = mxx - mnx; pc.by = mxy - mny; pc.bz = mxz - mnz; }
  return pc;
}

template <class S>
PairCloud collect_cloud(const GridVectorFieldT<S>& w, const Region& region) {
  const Grid& g = *w.grid;
  PairCloud pc;
  pc.comps = g.dim;
  std::int32_t mnx = INT32_MAX, mny = INT32_MAX, mnz = INT32_MAX;
  std::int32_t mxx = INT32_MIN, mxy = INT32_MIN, mxz = INT32_MIN;
  for (Index i = 0; i < g.size(); ++i) {
    if (!g.masked(i) || !region.contains(g.pos(i))) continue;
    const auto c = g.coords(i);
    pc.cx.push_back(static_cast<std::int32_t>(c[0]));
    pc.cy.push_back(static_cast<std::int32_t>(c[1]));
    pc.cz.push_back(static_cast<std::int32_t>(c[2]));
    pc.s0.push_back(static_cast<double>(w.v(i, 0)));
    pc.s1.push_back(static_cast<double>(w.v(i, 1)));
    pc.s2.push_back(g.dim == 3 ? static_cast<double>(w.v(i, 2)) : 0.0);
    mnx = std::min(mnx, pc.cx.back()); mxx = std::max(mxx, pc.cx.back());
    mny = std::min(mny, pc.cy.back()); mxy = std::max(mxy, pc.cy.back());
    mnz = std::min(mnz, pc.cz.back()); mxz = std::max(mxz, pc.cz.back());
  }
  if (!pc.cx.empty()) { pc.bx = mxx - mnx; pc.by = mxy - mny; pc.bz = mxz - mnz; }
  return pc;
}

// Sum over unordered pairs of |v_a - v_b|^q * |x_a - x_b|^{-(n + alpha q)};
// the kernel depends on the integer offset only, so it is tabulated once.
inline double gagliardo_pair_sum(const PairCloud& pc, double h, int dim, double alpha,
                                 double q) {
  const std::int64_t M = static_cast<std::int64_t>(pc.cx.size());
  if (M < 2) return 0.0;
  const double expo = -(static_cast<double>(dim) + alpha * q) / 2.0;
  const std::int64_t W = pc.bx + 1, H = pc.by + 1, D = pc.bz + 1;
  std::vector<double> K(static_cast<std::size_t>(W * H * D), 0.0);
  for (std::int64_t dz = 0; dz < D; ++dz)
    for (std::int64_t dy = 0; dy < H; ++dy)
      for (std::int64_t dx = 0; dx < W; ++dx) {
        const std::int64_t m = dx * dx + dy * dy + dz * dz;
        if (m == 0) continue;
        K[static_cast<std::size_t>((dz * H + dy) * W + dx)] =
            std::pow(static_cast<double>(m) * h * h, expo);
      }
  const int qkind = q == 1.0 ? 1 : (q == 2.0 ? 2 : 0);
  const auto term = [&](std::int64_t a) {
    const std::int32_t ax = pc.cx[a], ay = pc.cy[a], az = pc.cz[a];
    const double a0 = pc.s0[a];
    const double a1 = pc.comps > 1 ? pc.s1[a] : 0.0;
    const double a2 = pc.comps > 2 ? pc.s2[a] : 0.0;
    double s = 0.0;
    for (std::int64_t b = a + 1; b < M; ++b) {
      const std::int64_t dx = std::abs(pc.cx[b] - ax);
      const std::int64_t dy = std::abs(pc.cy[b] - ay);
      const std::int64_t dz = std::abs(pc.cz[b] - az);
      const double k = K[static_cast<std::size_t>((dz * H + dy) * W + dx)];
      double diff;
      if (pc.comps == 1) {
        diff = std::abs(pc.s0[b] - a0);
      } else {
        const double d0 = pc.s0[b] - a0, d1 = pc.s1[b] - a1, d2 = pc.s2[b] - a2;
        diff = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
      }
      if (qkind == 1) s += diff * k;
      else if (qkind == 2) s += diff * diff * k;
      else s += std::pow(diff, q) * k;
    }
    return s;
  };
  return det_sum(M, term, 256);
}

}  // namespace detail

// Discrete Gagliardo seminorm: both orderings of each pair, weight h^{2n},
// q-th root.  Pairs at distance >= h only (i.e. all distinct node pairs).
template <class Field>
double gagliardo_seminorm(const Field& f, double alpha, double q,
                          const Region& region = Region::all()) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("gagliardo_seminorm: alpha must lie in (0, 1)");
  if (!(q >= 1.0)) throw std::domain_error("gagliardo_seminorm: q must be >= 1");
  const Grid& g = *f.grid;
  const auto pc = detail::collect_cloud(f, region);
  const double s = detail::gagliardo_pair_sum(pc, g.h, g.dim, alpha, q);
  return std::pow(2.0 * s * std::pow(g.cell_volume(), 2), 1.0 / q);
}

// ------------------------------------------------------------ Nikolski ----

// sup over axes and sampled shifts m*h of |m h|^-alpha ||tau_{i,mh} f||_{L^q}.
// Every region node must have its shifted partner inside the mask.
template <class S>
double nikolski_seminorm(const GridFunctionT<S>& f, double alpha, double q,
                         const Region& region = Region::all(),
                         const std::vector<int>& shifts = {1}) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("nikolski_seminorm: alpha must lie in (0, 1]");
  if (!(q >= 1.0)) throw std::domain_error("nikolski_seminorm: q must be >= 1");
  if (shifts.empty()) throw std::domain_error("nikolski_seminorm: need at least one shift");
  const Grid& g = *f.grid;
  const Index stride[3] = {1, g.ext[0], g.ext[0] * g.ext[1]};
  double best = 0.0;
  for (int d = 0; d < g.dim; ++d) {
    for (int m : shifts) {
      if (m < 1) throw std::domain_error("nikolski_seminorm: shifts must be >= 1");
      const double s = det_sum(g.size(), [&](Index i) {
        if (!g.masked(i) || !region.contains(g.pos(i))) return 0.0;
        const auto c = g.coords(i);
        if (c[d] + m >= g.ext[d] || !g.masked(i + m * stride[d]))
          throw std::domain_error(
              "nikolski_seminorm: region too close to the mask boundary for shift");
        return detail::pow_q(std::abs(static_cast<double>(f.v[i + m * stride[d]] - f.v[i])), q);
      });
      const double lq = std::pow(s * g.cell_volume(), 1.0 / q);
      best = std::max(best, std::pow(static_cast<double>(m) * g.h, -alpha) * lq);
    }
  }
  return best;
}

// -------------------------------------------------------- Marcinkiewicz ---

struct LevelSetProfile {
  std::vector<double> lambdas;
  std::vector<double> measures;  // |{ |g| >= lambda }| in h^n units
  double sup_power = 0.0;        // sup lambda^t * measure
  double norm = 0.0;             // sup_power^(1/t)
};

namespace detail {

template <class S>
std::vector<double> region_abs_values(const GridFunctionT<S>& f, const Region& region) {
  const Grid& g = *f.grid;
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(g.size()));
  for (Index i = 0; i < g.size(); ++i)
    if (g.masked(i) && region.contains(g.pos(i)))
      vals.push_back(std::abs(static_cast<double>(f.v[i])));
  std::sort(vals.begin(), vals.end());
  return vals;
}

// Log-spaced lambda grid between the lo/hi quantiles of the positive values.
inline std::vector<double> level_lambdas(const std::vector<double>& sorted_vals) {
  auto first_pos = std::upper_bound(sorted_vals.begin(), sorted_vals.end(), 0.0);
  const std::int64_t P = sorted_vals.end() - first_pos;
  if (P <= 0) return {};
  const auto at = [&](double frac) {
    const auto k = std::min<std::int64_t>(
        P - 1, static_cast<std::int64_t>(std::floor(frac * static_cast<double>(P))));
    return *(first_pos + k);
  };
  const double lo = at(kLevelQuantileLo), hi = at(kLevelQuantileHi);
  if (!(hi > lo)) return {lo};
  const double ratio = hi / lo;
  std::vector<double> ls(kLevelGridPoints);
  for (int j = 0; j < kLevelGridPoints; ++j)
    ls[static_cast<std::size_t>(j)] =
        lo * std::pow(ratio, static_cast<double>(j) / (kLevelGridPoints - 1));
  return ls;
}

}  // namespace detail

template <class S>
LevelSetProfile marcinkiewicz_profile(const GridFunctionT<S>& f, double t,
                                      const Region& region = Region::all()) {
  if (!(t > 0.0)) throw std::domain_error("marcinkiewicz: t must be > 0");
  const Grid& g = *f.grid;
  LevelSetProfile prof;
  const auto vals =
      detail::region_abs_values(f, region);
  prof.lambdas = detail::level_lambdas(vals);
  const double hn = g.cell_volume();
  for (double lam : prof.lambdas) {
    const auto it = std::lower_bound(vals.begin(), vals.end(), lam);
    const double meas = static_cast<double>(vals.end() - it) * hn;
    prof.measures.push_back(meas);
    prof.sup_power = std::max(prof.sup_power, std::pow(lam, t) * meas);
  }
  prof.norm = prof.sup_power > 0.0 ? std::pow(prof.sup_power, 1.0 / t) : 0.0;
  return prof;
}

template <class S>
double marcinkiewicz_norm(const GridFunctionT<S>& f, double t,
                          const Region& region = Region::all()) {
  return marcinkiewicz_profile(f, t, region).norm;
}

template <class S>
double marcinkiewicz_norm(const GridVectorFieldT<S>& w, double t,
                          const Region& region = Region::all()) {
  return marcinkiewicz_norm(magnitude(w), t, region);
}

// Marcinkiewicz-Morrey: the ball supremum [ sup_B R^(theta-n) ||w||_{M^t(B)}^t ]^(1/t)
// with the lambda grid taken globally over the region (scale-free).  At
// theta = n this collapses to the plain M^t norm up to ball sampling.
template <class S>
double marcinkiewicz_morrey_norm(const GridFunctionT<S>& f, double t, double theta,
                                 const Region& region = Region::all(),
                                 const std::vector<Eigen::Vector3d>& extra_centers = {}) {
  if (!(t > 0.0)) throw std::domain_error("marcinkiewicz_morrey_norm: t must be > 0");
  const Grid& g = *f.grid;
  if (!(theta >= 0.0 && theta <= static_cast<double>(g.dim)))
    throw std::domain_error("marcinkiewicz_morrey_norm: theta must lie in [0, n]");
  const auto vals = detail::region_abs_values(f, region);
  const auto lambdas = detail::level_lambdas(vals);
  if (lambdas.empty()) return 0.0;
  const int L = static_cast<int>(lambdas.size());
  const double lam0 = lambdas.front();
  const double logstep = L > 1 ? std::log(lambdas.back() / lam0) / (L - 1) : 0.0;

  // Per-node lambda bin: largest j with lambda_j <= |v| (or -1 below lambda_0).
  std::vector<std::int16_t> bin(static_cast<std::size_t>(g.size()), -1);
  for (Index i = 0; i < g.size(); ++i) {
    const double a = std::abs(static_cast<double>(f.v[i]));
    if (!g.masked(i) || a <= 0.0) continue;
    int b;
    if (L == 1) b = a >= lam0 ? 0 : -1;
    else b = static_cast<int>(std::floor(std::log(a / lam0) / logstep));
    bin[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(std::clamp(b, -1, L - 1));
  }

  const auto maskpre = detail::mask_prefix(g);
  detail::BallFamilyOptions opts;
  opts.extra_centers = extra_centers;
  const double hn = g.cell_volume();
  std::vector<std::int64_t> hist(static_cast<std::size_t>(L) + 1, 0);
  double best = 0.0;
  detail::for_each_admissible_ball(g, region, opts, maskpre, [&](const Ball& b) {
    std::fill(hist.begin(), hist.end(), 0);
    detail::for_ball_rows(g, b, [&](Index row, Index i0, Index i1) {
      const Index base = row * g.ext[0];
      for (Index i = i0; i <= i1; ++i) ++hist[static_cast<std::size_t>(bin[static_cast<std::size_t>(base + i)] + 1)];
    });
    double sup = 0.0;
    std::int64_t count = 0;
    for (int j = L - 1; j >= 0; --j) {
      count += hist[static_cast<std::size_t>(j) + 1];
      sup = std::max(sup, std::pow(lambdas[static_cast<std::size_t>(j)], t) *
                              static_cast<double>(count) * hn);
    }
    best = std::max(best, std::pow(b.radius, theta - g.dim) * sup);
  });
  return best > 0.0 ? std::pow(best, 1.0 / t) : 0.0;
}

// ------------------------------------------------------------ BMO / VMO ---

namespace detail {

template <class S>
double ball_mean_oscillation_sup(const GridFunctionT<S>& f, const Region& region,
                                 double radius_cap,
                                 const std::vector<Eigen::Vector3d>& extra_centers) {
  const Grid& g = *f.grid;
  const auto maskpre = mask_prefix(g);
  const auto vpre = RowPrefix::build(g, [&](Index i) {
    return g.masked(i) ? static_cast<double>(f.v[i]) : 0.0;
  });
  BallFamilyOptions opts;
  opts.extra_centers = extra_centers;
  opts.max_radius = radius_cap;
  double best = 0.0;
  for_each_admissible_ball(g, region, opts, maskpre, [&](const Ball& b) {
    double sum = 0.0;
    Index count = 0;
    for_ball_rows(g, b, [&](Index row, Index i0, Index i1) {
      sum += vpre.sum(row, i0, i1);
      count += i1 - i0 + 1;
    });
    if (count == 0) return;
    const double mean = sum / static_cast<double>(count);
    double osc = 0.0;
    for_ball_rows(g, b, [&](Index row, Index i0, Index i1) {
      const Index base = row * g.ext[0];
      for (Index i = i0; i <= i1; ++i)
        osc += std::abs(static_cast<double>(f.v[base + i]) - mean);
    });
    best = std::max(best, osc / static_cast<double>(count));
  });
  return best;
}

}  // namespace detail

// [f]_BMO over the sampled family: sup_B  (1/|B|) Int_B |f - mean_B f|.
template <class S>
double bmo_seminorm(const GridFunctionT<S>& f, const Region& region = Region::all(),
                    const std::vector<Eigen::Vector3d>& extra_centers = {}) {
  return detail::ball_mean_oscillation_sup(f, region, 1.0, extra_centers);
}

// VMO modulus: the same supremum restricted to radii <= R (>= 4h still).
template <class S>
double vmo_modulus(const GridFunctionT<S>& f, double R,
                   const Region& region = Region::all(),
                   const std::vector<Eigen::Vector3d>& extra_centers = {}) {
  if (!(R > 0.0)) throw std::domain_error("vmo_modulus: R must be > 0");
  return detail::ball_mean_oscillation_sup(f, region, std::min(R, 1.0), extra_centers);
}

}  // namespace mdlab
