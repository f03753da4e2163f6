#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "mdlab/exponents.hpp"

using namespace mdlab;

TEST_CASE("context validation") {
  CHECK_NOTHROW(ExponentContext(2, 2.0, 2.0, 1.0, 0.0));
  CHECK_THROWS_AS(ExponentContext(1, 2.0, 1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(ExponentContext(2, 1.9, 1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(ExponentContext(2, 2.0, -0.1, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(ExponentContext(2, 2.0, 2.5, 1.0, 0.0), std::domain_error);  // theta > n
  CHECK_THROWS_AS(ExponentContext(2, 2.0, 1.0, 0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(ExponentContext(2, 2.0, 1.0, 1.0, -1.0), std::domain_error);
}

TEST_CASE("marginal integrability exponent b") {
  CHECK(exponent_b(2, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(exponent_b(3, 2.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(exponent_b(2, 3.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(exponent_b(3, 3.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(exponent_b(4, 2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(exponent_b(10, 2.0) == doctest::Approx(10.0 / 9.0).epsilon(1e-15));
  // b > p - 1 strictly for n >= 2
  for (int n = 2; n <= 8; ++n)
    for (double p : {2.0, 2.5, 3.0, 4.0}) CHECK(exponent_b(n, p) > p - 1.0);
}

TEST_CASE("density-order exponent m") {
  CHECK(exponent_m(2.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(exponent_m(3.0, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(exponent_m(2.0, 1.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(exponent_m(2.0, 1.0), std::domain_error);
  // m plays the role of b with theta in place of n
  CHECK(exponent_m(2.0, 3.0) == doctest::Approx(exponent_b(3, 2.0)).epsilon(1e-15));
}

TEST_CASE("gradient integrability deficit sigma(q)") {
  // n = 2, p = 2: sigma(q) = 2 - q
  CHECK(sigma_q(2, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigma_q(2, 2.0, 1.5) == doctest::Approx(0.5).epsilon(1e-15));
  // n = 3, p = 2: sigma(q) = 3 - 2q
  CHECK(sigma_q(3, 2.0, 1.2) == doctest::Approx(0.6).epsilon(1e-15));
  // endpoint q = p - 1 always gives sigma = 1
  for (int n = 2; n <= 6; ++n)
    for (double p : {2.0, 2.5, 3.0})
      CHECK(sigma_q(n, p, p - 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // domain: q in [p-1, b)
  CHECK_THROWS_AS(sigma_q(2, 2.0, 0.9), std::range_error);
  CHECK_THROWS_AS(sigma_q(2, 2.0, 2.0), std::range_error);  // q = b excluded
}

TEST_CASE("sigma and the Sobolev scale reproduce b") {
  // n q / (n - sigma(q)) == b for every admissible q
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> up(2.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const double p = up(rng);
    const double b = exponent_b(n, p);
    std::uniform_real_distribution<double> uq(p - 1.0, std::nexttoward(b, 0.0));
    const double q = uq(rng);
    const double s = sigma_q(n, p, q);
    CHECK(n * q / (n - s) == doctest::Approx(b).epsilon(1e-12));
    // Sobolev embedding at fractional order sigma(q) lands exactly on b
    CHECK(sobolev_embedding_exponent(n, s / q, q) == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("density-weighted deficit sigma(q, theta)") {
  // theta q / (theta - sigma(q, theta)) == m on the admissible range
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> up(2.0, 4.0);
  std::uniform_real_distribution<double> uth(1.2, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = up(rng);
    const double th = uth(rng);
    const double m = exponent_m(p, th);
    std::uniform_real_distribution<double> uq(p - 1.0, std::nexttoward(m, 0.0));
    const double q = std::max(p - 1.0, uq(rng));
    const double s = sigma_q_theta(p, th, q);
    CHECK(th * q / (th - s) == doctest::Approx(m).epsilon(1e-12));
  }
  CHECK(sigma_q_theta(2.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(sigma_q_theta(2.0, 2.0, 2.0), std::range_error);  // q = m excluded
}

TEST_CASE("fractional differentiability order delta(q)") {
  CHECK(delta_q(2.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(delta_q(3.0, 3.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(delta_q(2.0, 2.0, 1.5) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(delta_q(2.0, 1.5, 1.0), std::domain_error);  // needs theta >= p
  // delta(q) = q theta / m
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> up(2.0, 3.5);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = up(rng);
    std::uniform_real_distribution<double> uth(p, 6.0);
    const double th = uth(rng);
    std::uniform_real_distribution<double> uq(1.0, 2.5);
    const double q = uq(rng);
    CHECK(delta_q(p, th, q) == doctest::Approx(q * th / exponent_m(p, th)).epsilon(1e-12));
  }
}

TEST_CASE("capacitary borderline exponent") {
  CHECK(sigma_capacitary(2.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sigma_capacitary(3.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigma_capacitary(2.5, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(sigma_capacitary(2.0, 2.0), std::domain_error);  // needs theta < p
  CHECK_THROWS_AS(sigma_capacitary(2.0, -0.5), std::domain_error);
}

TEST_CASE("improvement map gamma and its fixed point") {
  // gamma(t) = delta / (delta + 1 - t); fixed point at t = delta
  for (double delta : {0.25, 0.5, 1.0}) {
    CHECK(gamma_iteration(delta, delta) == doctest::Approx(delta).epsilon(1e-15));
    CHECK(gamma_iteration(delta, 0.0) == doctest::Approx(delta / (delta + 1.0)).epsilon(1e-15));
    // strictly increasing in t and strictly above t below the fixed point
    double prev = -1.0;
    for (double t = 0.0; t < delta; t += delta / 16.0) {
      const double g = gamma_iteration(delta, t);
      CHECK(g > t);
      CHECK(g > prev);
      CHECK(g <= delta + 1e-15);
      prev = g;
    }
  }
  CHECK_THROWS_AS(gamma_iteration(1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(gamma_iteration(0.0, 0.0), std::domain_error);
}

TEST_CASE("iteration climbs to the fixed point") {
  // delta = 1: s1 = 1/8, t1 = 1/4, t2 = (gamma(1/8) + gamma(1/4)) / 2 = 58/105
  auto st = iterate_to_delta(1.0, 2);
  REQUIRE(st.sequence.size() == 2);
  CHECK(st.sequence[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(st.sequence[1] == doctest::Approx(58.0 / 105.0).epsilon(1e-14));

  for (double delta : {0.3, 0.7, 1.0}) {
    auto run = iterate_to_delta(delta, delta < 1.0 ? 80 : 4000);
    double prev = 0.0;
    for (double t : run.sequence) {
      // strictly increasing until it saturates at the fixed point in fp
      CHECK((t > prev || delta - t < 1e-12));
      CHECK(t < delta + 1e-12);  // never overshoots
      prev = t;
    }
    // geometric approach below the cap; only O(1/k) at the neutral point
    // delta = 1 where gamma'(delta) = delta
    CHECK(delta - run.sequence.back() < (delta < 1.0 ? 1e-6 : 1e-3));
  }
  CHECK_THROWS_AS(iterate_to_delta(1.0, 0), std::domain_error);
  CHECK_THROWS_AS(iterate_to_delta(1.5, 10), std::domain_error);
}

TEST_CASE("Sobolev embedding exponent") {
  CHECK(sobolev_embedding_exponent(2, 0.5, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(sobolev_embedding_exponent(3, 1.0, 2.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK_THROWS_AS(sobolev_embedding_exponent(2, 1.0, 2.0), std::domain_error);  // alpha q >= n
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(ExponentContext(2, 2.0, 2.0, 1.0, 0.0)) == Regime::SuperCapacitary);
  CHECK(classify_regime(ExponentContext(3, 2.5, 2.0, 1.5, 0.0)) == Regime::Capacitary);
  CHECK(classify_regime(ExponentContext(3, 2.0, 1.0, 1.0, 0.0)) == Regime::Capacitary);
  CHECK(classify_regime(ExponentContext(2, 3.0, 1.0, 2.0, 0.0)) == Regime::Dual);
  CHECK(to_string(Regime::Dual) == std::string("dual"));
  CHECK(to_string(Regime::Capacitary) == std::string("capacitary"));
  CHECK(to_string(Regime::SuperCapacitary) == std::string("super-capacitary"));
}
