#pragma once

// Exponent bookkeeping for measure-data gradient integrability: the duality
// threshold b, its Morrey-density refinement m, the decay exponents sigma,
// and the bootstrap iteration that climbs fractional orders up to delta.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdlab {

enum class Regime { Capacitary, SuperCapacitary, Dual };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Capacitary: return "capacitary";
    case Regime::SuperCapacitary: return "super-capacitary";
    default: return "dual";
  }
}

// Ambient problem data the exponents are computed from.  theta is the Morrey
// density order of the datum, q the integrability order under scrutiny, s the
// degeneracy parameter of the operator (carried along for reporting only).
struct ExponentContext {
  int n;
  double p;
  double theta;
  double q;
  double s;

  ExponentContext(int n_, double p_, double theta_, double q_ = 1.0, double s_ = 0.0)
      : n(n_), p(p_), theta(theta_), q(q_), s(s_) {
    if (n < 2) throw std::domain_error("ExponentContext: n must be an integer >= 2");
    if (!(p >= 2.0)) throw std::domain_error("ExponentContext: p must be >= 2");
    if (!(theta >= 0.0 && theta <= static_cast<double>(n)))
      throw std::domain_error("ExponentContext: theta must lie in [0, n]");
    if (!(q >= 1.0)) throw std::domain_error("ExponentContext: q must be >= 1");
    if (!(s >= 0.0)) throw std::domain_error("ExponentContext: s must be >= 0");
  }
};

// b = n(p-1)/(n-1): the maximal gradient integrability for general measures.
inline double exponent_b(int n, double p) {
  if (n < 2) throw std::domain_error("exponent_b: n must be >= 2");
  if (!(p >= 2.0)) throw std::domain_error("exponent_b: p must be >= 2");
  return static_cast<double>(n) * (p - 1.0) / (static_cast<double>(n) - 1.0);
}

// m = theta(p-1)/(theta-1): the density-improved threshold; collapses to b
// when theta = n and blows up as theta -> 1 (where Du becomes L^infinity-close).
inline double exponent_m(double p, double theta) {
  if (!(p >= 2.0)) throw std::domain_error("exponent_m: p must be >= 2");
  if (!(theta > 1.0)) throw std::domain_error("exponent_m: theta must exceed 1");
  return theta * (p - 1.0) / (theta - 1.0);
}

// sigma(q) = n - q(n-1)/(p-1), the comparison-decay rate at integrability q.
// Defined for p-1 <= q < b; positive exactly on that half-open range.
inline double sigma_q(int n, double p, double q) {
  const double b = exponent_b(n, p);
  if (!(q >= p - 1.0) || !(q < b))
    throw std::range_error("sigma_q: q must lie in [p-1, b)");
  return static_cast<double>(n) - q * (static_cast<double>(n) - 1.0) / (p - 1.0);
}

// sigma(q, theta) = theta - q(theta-1)/(p-1), the Morrey-weighted analogue;
// valid for p-1 <= q < m.
inline double sigma_q_theta(double p, double theta, double q) {
  const double m = exponent_m(p, theta);
  if (!(q >= p - 1.0) || !(q < m))
    throw std::range_error("sigma_q_theta: q must lie in [p-1, m)");
  return theta - q * (theta - 1.0) / (p - 1.0);
}

// delta(q) = q(theta-1)/(p-1): the Morrey order carried by Du in L^q when the
// datum has density order theta >= p.
inline double delta_q(double p, double theta, double q) {
  if (!(q >= 1.0)) throw std::domain_error("delta_q: q must be >= 1");
  if (!(theta >= p)) throw std::domain_error("delta_q: requires theta >= p");
  return q * (theta - 1.0) / (p - 1.0);
}

// sigma(p) = (p-theta)/(p-1) for the capacitary range 0 <= theta < p; always
// <= 2 when p >= 2 (and <= p', with equality iff theta = 0).
inline double sigma_capacitary(double p, double theta) {
  if (!(p >= 2.0)) throw std::domain_error("sigma_capacitary: p must be >= 2");
  if (!(theta >= 0.0 && theta < p))
    throw std::domain_error("sigma_capacitary: theta must lie in [0, p)");
  return (p - theta) / (p - 1.0);
}

// One step of the integrability bootstrap: gamma(t) = delta/(delta + 1 - t).
// Increasing on [0, delta], with gamma(delta) = delta its unique fixed point
// in (0, 1]; the closed endpoint is accepted for exactly that reason.
inline double gamma_iteration(double delta, double t) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::domain_error("gamma_iteration: delta must lie in (0, 1]");
  if (!(t >= 0.0 && t <= delta))
    throw std::domain_error("gamma_iteration: t must lie in [0, delta]");
  return delta / (delta + 1.0 - t);
}

struct IterationState {
  double delta = 0.0;          // target order
  double t = 0.0;              // current order (last element of sequence)
  std::vector<double> sequence;  // t_1, t_2, ... strictly increasing, < delta
};

// Runs the two-track iteration s_{k+1} = gamma(s_k),
// t_{k+1} = (gamma(s_k) + gamma(t_k))/2 from s_1 = delta/(4(delta+1)),
// t_1 = 2 s_1.  Both tracks increase strictly to delta; the t-track is the
// published sequence of fractional orders.
inline IterationState iterate_to_delta(double delta, int k_max) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::domain_error("iterate_to_delta: delta must lie in (0, 1]");
  if (k_max < 1 || k_max > 1000000)
    throw std::domain_error("iterate_to_delta: k_max must lie in [1, 1e6]");
  IterationState st;
  st.delta = delta;
  double s = delta / (4.0 * (delta + 1.0));
  double t = 2.0 * s;
  st.sequence.reserve(static_cast<std::size_t>(k_max));
  st.sequence.push_back(t);
  for (int k = 1; k < k_max; ++k) {
    const double gs = gamma_iteration(delta, s);
    const double gt = gamma_iteration(delta, t);
    t = 0.5 * (gs + gt);
    s = gs;
    st.sequence.push_back(t);
  }
  st.t = st.sequence.back();
  return st;
}

// Sobolev embedding order: W^{alpha,q} -> L^{nq/(n - alpha q)} for alpha q < n.
inline double sobolev_embedding_exponent(int n, double alpha, double q) {
  if (n < 2) throw std::domain_error("sobolev_embedding_exponent: n must be >= 2");
  if (!(alpha > 0.0) || !(q >= 1.0))
    throw std::domain_error("sobolev_embedding_exponent: need alpha > 0, q >= 1");
  if (!(alpha * q < static_cast<double>(n)))
    throw std::domain_error("sobolev_embedding_exponent: requires alpha*q < n");
  return static_cast<double>(n) * q / (static_cast<double>(n) - alpha * q);
}

inline Regime classify_regime(const ExponentContext& ctx) {
  if (ctx.p > static_cast<double>(ctx.n)) return Regime::Dual;
  return ctx.theta >= ctx.p ? Regime::SuperCapacitary : Regime::Capacitary;
}

}  // namespace mdlab
