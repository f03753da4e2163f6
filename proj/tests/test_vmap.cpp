#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mdlab/vmap.hpp"

using namespace mdlab;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {
std::mt19937 rng(42);
Vector3d random_vec(double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}
}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(VParams(2.0, 0.0));
  CHECK_THROWS_AS(VParams(1.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(VParams(2.0, -1.0), std::domain_error);
}

TEST_CASE("p = 2 is the identity") {
  const VParams vp(2.0, 0.7);  // s plays no role at p = 2
  const Vector3d z(0.3, -1.2, 2.0);
  CHECK((v_apply(vp, z) - z).norm() == 0.0);
  CHECK((a_model(vp, z) - z).norm() == 0.0);
}

TEST_CASE("closed forms at s = 0") {
  // p = 4: V(z) = |z| z, |V|^2 = |z|^4
  const VParams vp(4.0, 0.0);
  const Vector2d z(3.0, 4.0);  // |z| = 5
  const Vector2d V = v_apply(vp, z);
  CHECK(V.x() == doctest::Approx(15.0).epsilon(1e-15));
  CHECK(V.y() == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(V.squaredNorm() == doctest::Approx(std::pow(5.0, 4.0)).epsilon(1e-15));
  // a(z) = |z|^2 z
  const Vector2d A = a_model(vp, z);
  CHECK(A.x() == doctest::Approx(75.0).epsilon(1e-15));
}

TEST_CASE("elementary bounds |z|^p <= |V|^2 <= 2(s^p + |z|^p)") {
  for (double p : {2.0, 2.5, 3.0, 4.0, 5.5})
    for (double s : {0.0, 0.1, 1.0, 3.0}) {
      const VParams vp(p, s);
      for (int i = 0; i < 500; ++i) CHECK(check_elemV(vp, random_vec(4.0)));
      CHECK(check_elemV(vp, Vector3d::Zero()));
    }
}

TEST_CASE("two-sided equivalence ratio is pinched by p-dependent constants") {
  // The lower constant 2^{-(p-2)/2} is attained by antipodal pairs; the upper
  // (p/2)^2 comes from the operator norm of DV along the segment.
  for (double p : {2.0, 2.5, 3.0, 4.0})
    for (double s : {0.0, 0.5, 2.0}) {
      const VParams vp(p, s);
      const double lo = 0.25 * std::pow(2.0, -0.5 * (p - 2.0));
      const double hi = 0.25 * p * p * (1.0 + 1e-12);
      for (int i = 0; i < 500; ++i) {
        const Vector3d z1 = random_vec(3.0), z2 = random_vec(3.0);
        if ((z2 - z1).norm() == 0.0) continue;
        const double r = check_two_sided(vp, z1, z2);
        CHECK(r >= lo);
        CHECK(r <= hi);
      }
      // antipodal pair: ratio is exactly 2^{-(p-2)/2} at s = 0
      if (s == 0.0) {
        const Vector3d z(1.0, 0.0, 0.0);
        CHECK(check_two_sided(vp, Vector3d(-z), z) ==
              doctest::Approx(std::pow(2.0, -0.5 * (p - 2.0))).epsilon(1e-13));
      }
    }
  CHECK_THROWS_AS(check_two_sided(VParams(3.0, 0.0), Vector3d(1, 0, 0), Vector3d(1, 0, 0)),
                  std::domain_error);
}

TEST_CASE("monotonicity of the model field") {
  for (double p : {2.0, 3.0, 4.5})
    for (double s : {0.0, 1.0}) {
      const VParams vp(p, s);
      for (int i = 0; i < 500; ++i) {
        const Vector3d z1 = random_vec(3.0), z2 = random_vec(3.0);
        if ((z2 - z1).squaredNorm() == 0.0) continue;
        CHECK(check_monotonicity(vp, z1, z2) >= 0.0);
      }
    }
}

TEST_CASE("magnitude inversion round-trips") {
  for (double p : {2.0, 2.5, 3.0, 4.0, 6.0})
    for (double s : {0.0, 0.01, 1.0, 10.0}) {
      const VParams vp(p, s);
      std::uniform_real_distribution<double> u(-6.0, 6.0);  // log10 magnitude
      for (int i = 0; i < 200; ++i) {
        const double r = std::pow(10.0, u(rng));
        const double W = r * std::pow(vp.s * vp.s + r * r, (p - 2.0) / 4.0);
        CHECK(v_magnitude_inverse(vp, W) == doctest::Approx(r).epsilon(1e-10));
      }
      CHECK(v_magnitude_inverse(vp, 0.0) == 0.0);
    }
  // s = 0 closed form: r = W^{2/p}
  CHECK(v_magnitude_inverse(VParams(4.0, 0.0), 8.0) == doctest::Approx(std::pow(8.0, 0.5)));
  CHECK_THROWS_AS(v_magnitude_inverse(VParams(3.0, 0.0), -1.0), std::domain_error);
}

TEST_CASE("vector inversion round-trips") {
  for (double p : {2.0, 3.0, 4.0})
    for (double s : {0.0, 0.3}) {
      const VParams vp(p, s);
      for (int i = 0; i < 200; ++i) {
        const Vector3d z = random_vec(2.0);
        const Vector3d back = v_inverse(vp, v_apply(vp, z));
        CHECK((back - z).norm() <= 1e-9 * (1.0 + z.norm()));
      }
      CHECK(v_inverse(vp, Vector3d::Zero()).norm() == 0.0);
    }
}

TEST_CASE("scaling identity V_{s/A}(z/A) = A^{-p/2} V_s(z)") {
  for (double p : {2.0, 3.0, 4.0}) {
    for (double A : {2.0, 4.0, 0.5}) {
      const VParams vp(p, 0.8);
      const VParams vps(p, 0.8 / A);
      for (int i = 0; i < 100; ++i) {
        const Vector3d z = random_vec(3.0);
        const Vector3d lhs = v_apply(vps, (z / A).eval());
        const Vector3d rhs = std::pow(A, -0.5 * p) * v_apply(vp, z);
        CHECK((lhs - rhs).norm() <= 1e-13 * rhs.norm() + 1e-300);
      }
    }
  }
}
