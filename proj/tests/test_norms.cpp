#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "mdlab/grid.hpp"
#include "mdlab/norms.hpp"

using namespace mdlab;

namespace {

GridFunction random_field(GridPtr g, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  GridFunction f(g);
  for (Index i = 0; i < g->size(); ++i)
    if (g->masked(i)) f.v[i] = u(rng);
  return f;
}

// Independent tally of masked nodes inside a region (plain loop, no prefix
// machinery) used as the oracle for midpoint-rule integrals of constants.
Index count_nodes(const Grid& g, const Region& region) {
  Index c = 0;
  for (Index i = 0; i < g.size(); ++i)
    if (g.masked(i) && region.contains(g.pos(i))) ++c;
  return c;
}

Index count_ball_nodes(const Grid& g, const Ball& b) {
  Index c = 0;
  for (Index i = 0; i < g.size(); ++i)
    if (g.masked(i) && b.contains(g.pos(i))) ++c;
  return c;
}

}  // namespace

TEST_CASE("Lq norm of constants is the midpoint measure") {
  auto g = make_ball_grid(2, 65, 1.0);  // 3205 masked nodes, h = 1/32
  auto f = sample(g, [](const Eigen::Vector3d&) { return -2.0; });
  const double meas = 3205.0 / 1024.0;
  CHECK(lq_norm(f, 1.0) == doctest::Approx(2.0 * meas).epsilon(1e-14));
  CHECK(lq_norm(f, 2.0) == doctest::Approx(2.0 * std::sqrt(meas)).epsilon(1e-14));
  CHECK(lq_norm(f, 3.0) == doctest::Approx(2.0 * std::pow(meas, 1.0 / 3.0)).epsilon(1e-13));

  const Region rb = Region::in_ball(Eigen::Vector3d::Zero(), 0.5);
  const double sub = static_cast<double>(count_nodes(*g, rb)) * g->cell_volume();
  CHECK(lq_norm(f, 1.0, rb) == doctest::Approx(2.0 * sub).epsilon(1e-14));
  CHECK_THROWS_AS(lq_norm(f, 0.5), std::domain_error);
}

TEST_CASE("Lq norm of a vector field uses the Euclidean magnitude") {
  auto g = make_box_grid(2, 9, -1.0, 1.0);
  GridVectorField w(g);
  w.v.col(0).setConstant(3.0);
  w.v.col(1).setConstant(4.0);
  const double meas = 81.0 * 0.0625;
  CHECK(lq_norm(w, 1.0) == doctest::Approx(5.0 * meas).epsilon(1e-14));
}

TEST_CASE("norms are homogeneous, bit-exactly under power-of-two scaling") {
  auto g = make_ball_grid(2, 33, 1.0);
  auto f = random_field(g, 17);
  GridFunction f4 = f;
  f4.v *= 4.0;
  for (double q : {1.0, 2.0}) {
    CHECK(lq_norm(f4, q) == 4.0 * lq_norm(f, q));
    CHECK(morrey_norm(f4, q, 1.5) == 4.0 * morrey_norm(f, q, 1.5));
  }
  CHECK(lq_norm(f4, 2.5) == doctest::Approx(4.0 * lq_norm(f, 2.5)).epsilon(1e-14));
}

TEST_CASE("Morrey at theta = n is the best ball Lq") {
  auto g = make_ball_grid(2, 65, 1.0);
  auto f = sample(g, [](const Eigen::Vector3d& x) { return 1.0 + x.x(); });
  const double got = morrey_norm(f, 1.0, 2.0);
  double expect = 0.0;
  for (const Ball& b : sample_balls(*g, Region::all())) {
    double s = 0.0;
    for (Index i = 0; i < g->size(); ++i)
      if (g->masked(i) && b.contains(g->pos(i))) s += std::abs(f.v[i]) * g->cell_volume();
    expect = std::max(expect, s);
  }
  CHECK(got == doctest::Approx(expect).epsilon(1e-13));
  // theta = n Morrey is dominated by the full Lq norm
  CHECK(got <= lq_norm(f, 1.0) * (1.0 + 1e-13));
}

TEST_CASE("Morrey supremum weights small balls by R^(theta-n)") {
  // f = 1: sup_R R^(theta-2) * (lattice ball measure); compare against the
  // same maximum taken with independent counting.
  auto g = make_ball_grid(2, 65, 1.0);
  auto f = sample(g, [](const Eigen::Vector3d&) { return 1.0; });
  const double theta = 0.7, q = 2.0;
  double expect = 0.0;
  for (const Ball& b : sample_balls(*g, Region::all())) {
    const double mass = static_cast<double>(count_ball_nodes(*g, b)) * g->cell_volume();
    expect = std::max(expect, std::pow(b.radius, theta - 2.0) * mass);
  }
  CHECK(morrey_norm(f, q, theta) == doctest::Approx(std::pow(expect, 1.0 / q)).epsilon(1e-13));
}

TEST_CASE("no admissible ball means zero Morrey supremum") {
  auto g = make_box_grid(2, 5, -1.0, 1.0);  // h = 1/2, 4h = 2 > max radius 1
  auto f = sample(g, [](const Eigen::Vector3d&) { return 1.0; });
  CHECK(morrey_norm(f, 1.0, 1.0) == 0.0);
  CHECK(sample_balls(*g, Region::all()).empty());
}

TEST_CASE("Gagliardo seminorm closed forms on the 3x3 lattice") {
  // f = indicator of the center node, h = 1: the only nonzero differences are
  // center-vs-other: 4 at distance 1 and 4 at sqrt(2).
  auto g = make_box_grid(2, 3, -1.0, 1.0);
  GridFunction f(g);
  f.v[g->index(1, 1)] = 1.0;
  // q = 2, alpha = 1/2: exponent n + alpha q = 3; sum = 2(4 + 4 * 2^{-3/2})
  CHECK(gagliardo_seminorm(f, 0.5, 2.0) ==
        doctest::Approx(std::sqrt(8.0 + 2.0 * std::sqrt(2.0))).epsilon(1e-14));
  // q = 1, alpha = 1/2: exponent 2.5; sum = 2(4 + 4 * 2^{-5/4})
  CHECK(gagliardo_seminorm(f, 0.5, 1.0) ==
        doctest::Approx(8.0 + 8.0 * std::pow(2.0, -1.25)).epsilon(1e-14));
  // constants have zero seminorm
  auto c = sample(g, [](const Eigen::Vector3d&) { return 3.0; });
  CHECK(gagliardo_seminorm(c, 0.5, 2.0) == 0.0);
  CHECK_THROWS_AS(gagliardo_seminorm(f, 1.0, 2.0), std::domain_error);  // alpha < 1 required
}

TEST_CASE("Nikolski seminorm closed form and boundary guard") {
  auto g = make_box_grid(2, 5, -1.0, 1.0);  // h = 1/2
  GridFunction f(g);
  f.v[g->index(2, 2)] = 1.0;
  const Region rb = Region::in_ball(Eigen::Vector3d::Zero(), 0.75);
  // ||tau_h f||_2 = sqrt(2 h^2) = sqrt(1/2); h^{-1/2} = sqrt(2): product 1.
  CHECK(nikolski_seminorm(f, 0.5, 2.0, rb) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(nikolski_seminorm(f, 0.5, 2.0, Region::all()), std::domain_error);
}

TEST_CASE("Nikolski at shift h is dominated by Gagliardo on a fattened region") {
  auto g = make_box_grid(2, 17, -1.0, 1.0);  // h = 1/8
  auto f = random_field(g, 23);
  const double alpha = 0.4, q = 2.0;
  const double nik = nikolski_seminorm(f, alpha, q, Region::in_ball(Eigen::Vector3d::Zero(), 0.5));
  const double gag =
      gagliardo_seminorm(f, alpha, q, Region::in_ball(Eigen::Vector3d::Zero(), 0.5 + 2.0 / 8.0));
  CHECK(nik <= gag * (1.0 + 1e-12));
}

TEST_CASE("Marcinkiewicz norm: step data, Chebyshev bound, constants") {
  auto g = make_box_grid(2, 5, -1.0, 1.0);  // h = 1/2, cell measure 1/4
  GridFunction f(g);
  f.v[g->index(0, 0)] = 8.0;
  f.v[g->index(1, 0)] = 1.0;
  f.v[g->index(2, 0)] = 1.0;
  f.v[g->index(3, 0)] = 1.0;
  // t = 1: max(1 * 4/4, 8 * 1/4) = 2, attained at the top data value
  CHECK(marcinkiewicz_norm(f, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

  auto r = random_field(g, 31);
  for (double t : {1.0, 2.0})
    CHECK(marcinkiewicz_norm(r, t) <= lq_norm(r, t) * (1.0 + 1e-12));

  // a constant has coinciding weak and strong norms
  auto c = sample(g, [](const Eigen::Vector3d&) { return 0.7; });
  CHECK(marcinkiewicz_norm(c, 2.0) == doctest::Approx(lq_norm(c, 2.0)).epsilon(1e-13));

  // quantile-anchored level grid makes the estimator scale-equivariant
  auto big = random_field(g, 37);
  GridFunction scaled = big;
  scaled.v *= 2.0;
  CHECK(marcinkiewicz_norm(scaled, 1.5) ==
        doctest::Approx(2.0 * marcinkiewicz_norm(big, 1.5)).epsilon(1e-9));

  // zero function: empty level grid
  GridFunction z(g);
  CHECK(marcinkiewicz_norm(z, 1.0) == 0.0);
}

TEST_CASE("level-set profile bookkeeping") {
  auto g = make_ball_grid(2, 33, 1.0);
  auto f = random_field(g, 41, 0.5, 3.0);
  const auto prof = marcinkiewicz_profile(f, 2.0, Region::all());
  REQUIRE(!prof.lambdas.empty());
  CHECK(prof.lambdas.size() <= 200);
  for (std::size_t i = 1; i < prof.lambdas.size(); ++i) {
    CHECK(prof.lambdas[i] > prof.lambdas[i - 1]);
    CHECK(prof.measures[i] <= prof.measures[i - 1]);  // nonincreasing tails
  }
  CHECK(prof.norm == doctest::Approx(std::pow(prof.sup_power, 0.5)).epsilon(1e-13));
  double sup = 0.0;
  for (std::size_t i = 0; i < prof.lambdas.size(); ++i)
    sup = std::max(sup, prof.lambdas[i] * prof.lambdas[i] * prof.measures[i]);
  CHECK(prof.sup_power == doctest::Approx(sup).epsilon(1e-13));
}

TEST_CASE("Marcinkiewicz-Morrey collapses below the plain weak norm at theta = n") {
  auto g = make_ball_grid(2, 65, 1.0);
  auto f = random_field(g, 43, 0.0, 5.0);
  CHECK(marcinkiewicz_morrey_norm(f, 2.0, 2.0) <= marcinkiewicz_norm(f, 2.0) * (1.0 + 1e-12));
  CHECK(marcinkiewicz_morrey_norm(f, 2.0, 1.0) >= 0.0);
  CHECK_THROWS_AS(marcinkiewicz_morrey_norm(f, 2.0, 2.5), std::domain_error);
}

TEST_CASE("BMO and VMO on a linear function") {
  auto g = make_box_grid(2, 33, -1.0, 1.0);  // h = 1/16
  auto f = sample(g, [](const Eigen::Vector3d& x) { return x.x(); });
  // best ball is the full centered unit ball: mean 0, mean |x_1| = 0.4221311475
  // (exact lattice tally over i^2 + j^2 < 256 at h = 1/16)
  CHECK(bmo_seminorm(f) == doctest::Approx(0.4221311475409836).epsilon(1e-12));
  // radius cap 1/4: every admissible ball is a lattice translate, mean |x_1 -
  // mean| = 0.1 exactly
  CHECK(vmo_modulus(f, 0.25) == doctest::Approx(0.1).epsilon(1e-12));
  // constants have zero oscillation
  auto c = sample(g, [](const Eigen::Vector3d&) { return 5.0; });
  CHECK(bmo_seminorm(c) == doctest::Approx(0.0));
  // monotone in the radius cap
  CHECK(vmo_modulus(f, 0.25) <= vmo_modulus(f, 0.5) * (1.0 + 1e-13));
  CHECK(vmo_modulus(f, 0.5) <= bmo_seminorm(f) * (1.0 + 1e-13));
}

TEST_CASE("oscillation supremum matches an independent two-level tally") {
  auto g = make_box_grid(2, 17, -1.0, 1.0);  // h = 1/8
  auto f = random_field(g, 47);
  double expect = 0.0;
  for (const Ball& b : sample_balls(*g, Region::all())) {
    double mean = 0.0;
    Index cnt = 0;
    for (Index i = 0; i < g->size(); ++i)
      if (g->masked(i) && b.contains(g->pos(i))) {
        mean += f.v[i];
        ++cnt;
      }
    mean /= static_cast<double>(cnt);
    double osc = 0.0;
    for (Index i = 0; i < g->size(); ++i)
      if (g->masked(i) && b.contains(g->pos(i))) osc += std::abs(f.v[i] - mean);
    expect = std::max(expect, osc / static_cast<double>(cnt));
  }
  CHECK(bmo_seminorm(f) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("Morrey norms are nonincreasing in theta") {
  // Each admissible ball has R <= 1, so R^(theta-n) is nonincreasing in theta
  // ball by ball; the supremum inherits it.
  auto g = make_ball_grid(2, 65, 1.0);
  auto f = random_field(g, 53, 0.0, 2.0);
  double prev = 1e300;
  for (double theta : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double m = morrey_norm(f, 1.5, theta);
    CHECK(m <= prev * (1.0 + 1e-14));
    prev = m;
  }
  double prev_mm = 1e300;
  for (double theta : {0.0, 1.0, 2.0}) {
    const double m = marcinkiewicz_morrey_norm(f, 1.5, theta);
    CHECK(m <= prev_mm * (1.0 + 1e-14));
    prev_mm = m;
  }
}

TEST_CASE("Morrey norms obey the dilation identity on matched lattices") {
  // g~(y) = g(y/2) sampled on the radius-1 grid reproduces g on the radius-1/2
  // grid node for node, and the admissible ball families correspond under
  // doubling, so ||g~||_{L^{q,theta}(B_1)} = 2^(theta/q) ||g||_{L^{q,theta}(B_{1/2})}
  // holds exactly rather than merely within resampling tolerance.
  auto g1 = make_ball_grid(2, 129, 0.5);
  auto g2 = make_ball_grid(2, 129, 1.0);
  auto base = [](const Eigen::Vector3d& x) {
    return std::exp(0.8 * x.x() - 0.5 * x.y()) + x.x();
  };
  auto f1 = sample(g1, base);
  auto f2 = sample(g2, [&](const Eigen::Vector3d& y) { return base(0.5 * y); });
  for (double theta : {0.7, 1.0, 2.0})
    for (double q : {1.0, 2.0}) {
      const double ratio = morrey_norm(f2, q, theta) / morrey_norm(f1, q, theta);
      CHECK(ratio == doctest::Approx(std::pow(2.0, theta / q)).epsilon(1e-13));
    }
}

TEST_CASE("deterministic reduction matches plain summation") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> xs(10007);
  for (auto& x : xs) x = u(rng);
  double plain = 0.0;
  for (double x : xs) plain += x;
  const double ds = det_sum(static_cast<std::int64_t>(xs.size()),
                            [&](std::int64_t i) { return xs[static_cast<std::size_t>(i)]; });
  CHECK(ds == doctest::Approx(plain).epsilon(1e-12));
  // pairwise tree over an exactly representable ramp is exact
  std::vector<double> ramp(1000);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  CHECK(pairwise_combine(ramp) == 499500.0);
  CHECK(pairwise_combine({}) == 0.0);
}
