#pragma once

// The auxiliary map V_s(z) = (s^2 + |z|^2)^((p-2)/4) z and the model vector
// field a(z) = (s^2 + |z|^2)^((p-2)/2) z.  |V(z_2) - V(z_1)|^2 is the natural
// squared distance for degenerate p-growth problems; everything downstream
// (comparison estimates, energy bounds) is phrased through it.

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace mdlab {

struct VParams {
  double p = 2.0;
  double s = 0.0;

  VParams(double p_, double s_) : p(p_), s(s_) {
    if (!(p >= 2.0)) throw std::domain_error("VParams: p must be >= 2");
    if (!(s >= 0.0)) throw std::domain_error("VParams: s must be >= 0");
  }
};

template <class Derived>
auto v_apply(const VParams& vp, const Eigen::MatrixBase<Derived>& z) ->
    typename Derived::PlainObject {
  using S = typename Derived::Scalar;
  const S m = S(vp.s) * S(vp.s) + z.squaredNorm();
  const S f = std::pow(m, S((vp.p - 2.0) / 4.0));
  return f * z.derived();
}

// Model monotone field a(z); <a(z2)-a(z1), z2-z1> controls |V(z2)-V(z1)|^2.
template <class Derived>
auto a_model(const VParams& vp, const Eigen::MatrixBase<Derived>& z) ->
    typename Derived::PlainObject {
  using S = typename Derived::Scalar;
  const S m = S(vp.s) * S(vp.s) + z.squaredNorm();
  const S f = std::pow(m, S((vp.p - 2.0) / 2.0));
  return f * z.derived();
}

// Solves (s^2 + r^2)^((p-2)/4) r = W for r >= 0.  The left side is strictly
// increasing and convex in r, so a bracketed Newton from the upper end
// converges monotonically; W^(2/p) is always an upper bracket.
inline double v_magnitude_inverse(const VParams& vp, double W) {
  if (!(W >= 0.0)) throw std::domain_error("v_magnitude_inverse: W must be >= 0");
  if (W == 0.0) return 0.0;
  if (vp.p == 2.0) return W;

  double hi = std::pow(W, 2.0 / vp.p);
  if (vp.s > 0.0) hi = std::min(hi, W / std::pow(vp.s, (vp.p - 2.0) / 2.0));
  double lo = 0.0;
  double r = hi;
  for (int it = 0; it < 200; ++it) {
    const double m = vp.s * vp.s + r * r;
    const double f = std::pow(m, (vp.p - 2.0) / 4.0) * r;
    const double resid = f - W;
    if (std::abs(resid) <= 1e-12 * W) break;
    if (resid > 0.0) hi = r; else lo = r;
    const double df = std::pow(m, (vp.p - 6.0) / 4.0) * (m + 0.5 * (vp.p - 2.0) * r * r);
    double rn = r - resid / df;
    if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
    r = rn;
  }
  return r;
}

template <class Derived>
auto v_inverse(const VParams& vp, const Eigen::MatrixBase<Derived>& w) ->
    typename Derived::PlainObject {
  using S = typename Derived::Scalar;
  const S W = w.norm();
  if (W == S(0)) return Derived::PlainObject::Zero(w.rows(), w.cols());
  const double r = v_magnitude_inverse(vp, static_cast<double>(W));
  return (S(r) / W) * w.derived();
}

// |z|^p <= |V(z)|^2 <= 2 (s^p + |z|^p), with the exact constants 1 and 2.
template <class Derived>
bool check_elemV(const VParams& vp, const Eigen::MatrixBase<Derived>& z) {
  const double zn = static_cast<double>(z.norm());
  const double v2 = static_cast<double>(v_apply(vp, z).squaredNorm());
  const double lowr = std::pow(zn, vp.p);
  const double uppr = 2.0 * (std::pow(vp.s, vp.p) + std::pow(zn, vp.p));
  const double slack = 1e-14 * std::max(1.0, uppr);
  return lowr <= v2 + slack && v2 <= uppr + slack;
}

// Empirical two-sided ratio |V(z2)-V(z1)|^2 / [ (s^2+|z1|^2+|z2|^2)^((p-2)/2) |z2-z1|^2 ].
// Bounded above and below by dimensional constants; callers probe the spread.
template <class Derived>
double check_two_sided(const VParams& vp, const Eigen::MatrixBase<Derived>& z1,
                       const Eigen::MatrixBase<Derived>& z2) {
  const double dz2 = static_cast<double>((z2 - z1).squaredNorm());
  if (dz2 == 0.0) throw std::domain_error("check_two_sided: z1 and z2 must differ");
  const double dv2 = static_cast<double>((v_apply(vp, z2) - v_apply(vp, z1)).squaredNorm());
  const double wgt = std::pow(vp.s * vp.s +
                              static_cast<double>(z1.squaredNorm()) +
                              static_cast<double>(z2.squaredNorm()),
                              (vp.p - 2.0) / 2.0);
  return dv2 / (wgt * dz2);
}

// Returns <a(z2) - a(z1), z2 - z1>; nonnegative by monotonicity of a.
template <class Derived>
double check_monotonicity(const VParams& vp, const Eigen::MatrixBase<Derived>& z1,
                          const Eigen::MatrixBase<Derived>& z2) {
  return static_cast<double>((a_model(vp, z2) - a_model(vp, z1)).dot(z2 - z1));
}

}  // namespace mdlab
