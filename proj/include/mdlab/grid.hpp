#pragma once

// Uniform lattices over axis-aligned boxes with an inclusion mask, plus the
// field types every estimator operates on.  Node i of a d-dim grid sits at
// origin + h * (ix, iy, iz); linear index is x-fastest:
// idx = (iz * ny + iy) * nx + ix.  A node belongs to the domain iff its mask
// byte is nonzero ("node-center membership").

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace mdlab {

using Index = std::int64_t;

struct Grid {
  int dim = 2;
  std::array<Index, 3> ext{1, 1, 1};  // node counts; ext[2] == 1 for dim == 2
  double h = 1.0;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  std::vector<std::uint8_t> mask;

  Index size() const { return ext[0] * ext[1] * ext[2]; }
  Index index(Index i, Index j, Index k = 0) const { return (k * ext[1] + j) * ext[0] + i; }

  std::array<Index, 3> coords(Index idx) const {
    std::array<Index, 3> c;
    c[0] = idx % ext[0];
    idx /= ext[0];
    c[1] = idx % ext[1];
    c[2] = idx / ext[1];
    return c;
  }

  bool in_bounds(Index i, Index j, Index k = 0) const {
    return i >= 0 && i < ext[0] && j >= 0 && j < ext[1] && k >= 0 && k < ext[2];
  }

  bool masked(Index idx) const { return mask[static_cast<std::size_t>(idx)] != 0; }

  Eigen::Vector3d pos(Index i, Index j, Index k = 0) const {
    return origin + h * Eigen::Vector3d(static_cast<double>(i), static_cast<double>(j),
                                        static_cast<double>(k));
  }
  Eigen::Vector3d pos(Index idx) const {
    const auto c = coords(idx);
    return pos(c[0], c[1], c[2]);
  }

  double cell_volume() const { return std::pow(h, dim); }

  Index masked_count() const {
    Index c = 0;
    for (auto m : mask) c += (m != 0);
    return c;
  }
  double measure() const { return static_cast<double>(masked_count()) * cell_volume(); }

  // Geometric center of the bounding box (the natural "domain center").
  Eigen::Vector3d center() const {
    Eigen::Vector3d c = origin;
    for (int d = 0; d < dim; ++d) c[d] += 0.5 * h * static_cast<double>(ext[d] - 1);
    return c;
  }
};

using GridPtr = std::shared_ptr<const Grid>;

// Full-mask lattice over [lo, hi]^dim with n nodes per axis (h = (hi-lo)/(n-1)).
inline GridPtr make_box_grid(int dim, Index n, double lo = 0.0, double hi = 1.0) {
  if (dim != 2 && dim != 3) throw std::domain_error("make_box_grid: dim must be 2 or 3");
  if (n < 2) throw std::domain_error("make_box_grid: need at least 2 nodes per axis");
  auto g = std::make_shared<Grid>();
  g->dim = dim;
  g->ext = {n, n, dim == 3 ? n : 1};
  g->h = (hi - lo) / static_cast<double>(n - 1);
  g->origin = Eigen::Vector3d::Zero();
  for (int d = 0; d < dim; ++d) g->origin[d] = lo;
  g->mask.assign(static_cast<std::size_t>(g->size()), 1);
  return g;
}

// Lattice over [-R, R]^dim masked to the inscribed open ball |x| < R.
inline GridPtr make_ball_grid(int dim, Index n, double R = 1.0) {
  auto base = make_box_grid(dim, n, -R, R);
  auto g = std::make_shared<Grid>(*base);
  const double R2 = R * R;
  for (Index idx = 0; idx < g->size(); ++idx) {
    const Eigen::Vector3d x = g->pos(idx);
    g->mask[static_cast<std::size_t>(idx)] = (x.squaredNorm() < R2) ? 1 : 0;
  }
  return g;
}

template <class Scalar>
struct GridFunctionT {
  GridPtr grid;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> v;

  GridFunctionT() = default;
  explicit GridFunctionT(GridPtr g)
      : grid(std::move(g)),
        v(Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(grid->size())) {}
  GridFunctionT(GridPtr g, Eigen::Array<Scalar, Eigen::Dynamic, 1> values)
      : grid(std::move(g)), v(std::move(values)) {
    if (v.size() != grid->size())
      throw std::invalid_argument("GridFunction: value count != grid size");
  }
};

template <class Scalar>
struct GridVectorFieldT {
  GridPtr grid;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v;  // size() x dim, row per node

  GridVectorFieldT() = default;
  explicit GridVectorFieldT(GridPtr g)
      : grid(std::move(g)),
        v(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(grid->size(),
                                                                      grid->dim)) {}
  GridVectorFieldT(GridPtr g, Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values)
      : grid(std::move(g)), v(std::move(values)) {
    if (v.rows() != grid->size() || v.cols() != grid->dim)
      throw std::invalid_argument("GridVectorField: value shape != grid size x dim");
  }
};

using GridFunction = GridFunctionT<double>;
using GridVectorField = GridVectorFieldT<double>;

template <class F>
GridFunction sample(GridPtr g, F&& fn) {
  GridFunction out(g);
  for (Index idx = 0; idx < g->size(); ++idx)
    if (g->masked(idx)) out.v[idx] = fn(g->pos(idx));
  return out;
}

// Balls are open: a node belongs iff |x - center| < radius (squared test, no
// tolerance, so membership is deterministic and consistent everywhere).
struct Ball {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;
  bool contains(const Eigen::Vector3d& x) const {
    return (x - center).squaredNorm() < radius * radius;
  }
};

// region = whole mask, an open ball, or an annulus r0 <= |x-c| < r1.
struct Region {
  enum class Kind { All, InBall, Annulus };
  Kind kind = Kind::All;
  Ball ball;
  double inner = 0.0;

  static Region all() { return {}; }
  static Region in_ball(const Eigen::Vector3d& c, double r) {
    Region rg;
    rg.kind = Kind::InBall;
    rg.ball = {c, r};
    return rg;
  }
  static Region annulus(const Eigen::Vector3d& c, double r0, double r1) {
    Region rg;
    rg.kind = Kind::Annulus;
    rg.ball = {c, r1};
    rg.inner = r0;
    return rg;
  }

  bool contains(const Eigen::Vector3d& x) const {
    switch (kind) {
      case Kind::All: return true;
      case Kind::InBall: return ball.contains(x);
      default:
        return ball.contains(x) && (x - ball.center).squaredNorm() >= inner * inner;
    }
  }

  // True if the closed ball b lies geometrically inside the region (used for
  // Morrey-type suprema; All-regions defer to the mask test instead).
  bool contains_ball(const Ball& b) const {
    if (kind == Kind::All) return true;
    const double d = (b.center - ball.center).norm();
    if (d + b.radius > ball.radius + 1e-12) return false;
    if (kind == Kind::Annulus && d - b.radius < inner - 1e-12) return false;
    return true;
  }
};

// Second-order central differences at interior nodes, first-order one-sided
// where only one neighbor along an axis is masked, zero where none is.
template <class S>
GridVectorFieldT<S> gradient(const GridFunctionT<S>& f) {
  const Grid& g = *f.grid;
  GridVectorFieldT<S> out(f.grid);
  const Index sx = 1, sy = g.ext[0], sz = g.ext[0] * g.ext[1];
  const std::array<Index, 3> stride{sx, sy, sz};
  if (g.masked_count() < 2)
    throw std::domain_error("gradient: degenerate mask (fewer than 2 nodes)");
  for (Index idx = 0; idx < g.size(); ++idx) {
    if (!g.masked(idx)) continue;
    const auto c = g.coords(idx);
    for (int d = 0; d < g.dim; ++d) {
      const bool has_m = c[d] > 0 && g.masked(idx - stride[d]);
      const bool has_p = c[d] + 1 < g.ext[d] && g.masked(idx + stride[d]);
      if (has_m && has_p)
        out.v(idx, d) = (f.v[idx + stride[d]] - f.v[idx - stride[d]]) / (S(2) * S(g.h));
      else if (has_p)
        out.v(idx, d) = (f.v[idx + stride[d]] - f.v[idx]) / S(g.h);
      else if (has_m)
        out.v(idx, d) = (f.v[idx] - f.v[idx - stride[d]]) / S(g.h);
      // else: isolated along this axis — leave 0
    }
  }
  return out;
}

template <class S>
GridFunctionT<S> magnitude(const GridVectorFieldT<S>& w) {
  GridFunctionT<S> out(w.grid);
  out.v = w.v.rowwise().norm().array();
  return out;
}

// T_k(s) = max(-k, min(k, s)); Phi_k(s) = T_1(s - T_k(s)).
template <class S>
GridFunctionT<S> truncate_T(const GridFunctionT<S>& f, double k) {
  if (!(k >= 0.0)) throw std::domain_error("truncate_T: k must be >= 0");
  GridFunctionT<S> out(f.grid);
  out.v = f.v.min(S(k)).max(S(-k));
  return out;
}

template <class S>
GridFunctionT<S> truncate_Phi(const GridFunctionT<S>& f, double k) {
  if (!(k >= 0.0)) throw std::domain_error("truncate_Phi: k must be >= 0");
  GridFunctionT<S> out(f.grid);
  out.v = (f.v - f.v.min(S(k)).max(S(-k))).min(S(1)).max(S(-1));
  return out;
}

}  // namespace mdlab
