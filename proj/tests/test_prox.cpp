#include <doctest.h>

#include <cmath>
#include <random>

#include "l0pack/prox.hpp"
#include "oracles.hpp"

using l0::BoxConstraint;
using l0::TieRule;

TEST_SUITE_BEGIN("prox");

TEST_CASE("project_box clamps componentwise") {
  Eigen::Vector3d x(2, -3, 0);
  BoxConstraint box = BoxConstraint::uniform(3, -1, 1);
  Eigen::VectorXd p = l0::project_box(x, box);
  CHECK(p.isApprox(Eigen::Vector3d(1, -1, 0)));

  Eigen::Vector3d inside(0.5, -0.5, 0);
  CHECK(l0::project_box(inside, box) == inside);

  Eigen::VectorXd one(1);
  one << 0.5;
  BoxConstraint b1{Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 3.0)};
  CHECK(l0::project_box(one, b1)(0) == 1.0);
}

TEST_CASE("soft_threshold formula and symmetry") {
  Eigen::VectorXd c(1);
  c << 2.0;
  CHECK(l0::soft_threshold(c, 0.5)(0) == doctest::Approx(1.5));
  c << 0.3;
  CHECK(l0::soft_threshold(c, 0.5)(0) == 0.0);
  c << -2.0;
  CHECK(l0::soft_threshold(c, 0.5)(0) == doctest::Approx(-1.5));
}

TEST_CASE("soft_threshold is 1-Lipschitz") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd a(8), b(8);
    for (int i = 0; i < 8; ++i) {
      a[i] = gauss(rng);
      b[i] = gauss(rng);
    }
    const double lam = std::abs(gauss(rng)) + 0.1;
    CHECK((l0::soft_threshold(a, lam) - l0::soft_threshold(b, lam)).norm() <=
          (a - b).norm() + 1e-14);
  }
}

TEST_CASE("hard_threshold cases and tie rules") {
  Eigen::VectorXd c(2);
  c << 3.0, 0.5;
  Eigen::VectorXd r = l0::hard_threshold(c, {1.0, TieRule::Zero});
  CHECK(r(0) == 3.0);
  CHECK(r(1) == 0.0);

  Eigen::VectorXd boundary(1);
  boundary << 1.0;
  CHECK(l0::hard_threshold(boundary, {1.0, TieRule::Zero})(0) == 0.0);
  CHECK(l0::hard_threshold(boundary, {1.0, TieRule::Keep})(0) == 1.0);
}

TEST_CASE("prox_l0_box_1d hand-worked cases") {
  CHECK(l0::prox_l0_box_1d(0.0, 1.0, -1, 1) == 0.0);
  CHECK(l0::prox_l0_box_1d(1.2, 0.5, 2, 3) == 2.0);   // zero infeasible: plain clamp
  CHECK(l0::prox_l0_box_1d(2.0, 0.5, -1, 1) == 1.0);  // h(1)=1.0 < h(0)=2.0
  CHECK(l0::prox_l0_box_1d(0.9, 0.5, -1, 1) == 0.0);  // sqrt(2*lam)=1 > |c|
  CHECK_THROWS_AS(l0::prox_l0_box_1d(0.0, 1.0, 1, -1), std::invalid_argument);
}

TEST_CASE("prox_l0_box componentwise and unbounded degeneration") {
  Eigen::VectorXd c(2);
  c << 0.0, 0.0;
  BoxConstraint box = BoxConstraint::uniform(2, -1, 1);
  CHECK(l0::prox_l0_box(c, 0.7, box).isZero());

  c << 2.0, 0.9;
  Eigen::VectorXd r = l0::prox_l0_box(c, 0.5, box);
  CHECK(r(0) == 1.0);
  CHECK(r(1) == 0.0);

  Eigen::VectorXd single(1);
  single << 2.0;
  CHECK(l0::prox_l0_box(single, 0.5, BoxConstraint::unbounded(1))(0) == 2.0);
}

TEST_CASE("oracle equivalence, feasibility, magnitude floor") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0, 2);
  std::uniform_real_distribution<double> unif(0.02, 2.0);
  std::uniform_int_distribution<int> kind(0, 3);

  for (int trial = 0; trial < 2000; ++trial) {
    const double c = gauss(rng);
    const double lam = unif(rng);
    double lo, hi;
    switch (kind(rng)) {
      case 0:
        lo = -std::numeric_limits<double>::infinity();
        hi = std::numeric_limits<double>::infinity();
        break;
      case 1:
        lo = gauss(rng);
        hi = lo + std::abs(gauss(rng));
        break;
      case 2:
        lo = -std::abs(gauss(rng));
        hi = std::abs(gauss(rng));
        break;
      default:
        lo = gauss(rng);
        hi = std::numeric_limits<double>::infinity();
        break;
    }
    const double x = l0::prox_l0_box_1d(c, lam, lo, hi);
    CAPTURE(c);
    CAPTURE(lam);
    CAPTURE(lo);
    CAPTURE(hi);
    REQUIRE(x >= lo);
    REQUIRE(x <= hi);
    const double hx = oracles::h_value(x, c, lam, lo, hi);
    REQUIRE(hx <= oracles::prox_1d_min_value(c, lam, lo, hi, 2000) + 1e-12);
    if (x != 0.0) {
      double floor = std::sqrt(2.0 * lam);
      if (lo != 0.0 && std::isfinite(lo)) floor = std::min(floor, std::abs(lo));
      if (hi != 0.0 && std::isfinite(hi)) floor = std::min(floor, std::abs(hi));
      REQUIRE(std::abs(x) >= floor - 1e-12);
    }
  }
}

TEST_CASE("unbounded prox equals hard threshold exactly") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0, 2);
  const double inf = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 500; ++trial) {
    const double c = gauss(rng);
    const double lam = std::abs(gauss(rng)) + 0.01;
    CHECK(l0::prox_l0_box_1d(c, lam, -inf, inf) ==
          l0::hard_threshold_scalar(c, std::sqrt(2.0 * lam)));
  }
}

TEST_SUITE_END();
