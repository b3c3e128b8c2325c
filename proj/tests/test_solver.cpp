#include "fracg/solver.hpp"

#include <cmath>

#include "doctest.h"
#include "fracg/util.hpp"

using namespace fracg;

TEST_CASE("nonlinearity construction estimates and verifies regularity") {
  auto lin = Nonlinearity::make([](double t) { return std::sin(t); },
                                [](double t) { return std::cos(t); });
  CHECK(lin.lipschitz_const >= 0.95);
  CHECK(lin.lipschitz_const <= 1.2);
  CHECK(!lin.fprime_nondecreasing);  // cos oscillates over [-10, 10]

  auto sq = Nonlinearity::make([](double t) { return t * t; });
  CHECK(sq.fprime_nondecreasing);
  CHECK(!sq.fprime_nonpos_below_1);

  auto dec = Nonlinearity::make([](double t) { return -t; });
  CHECK(dec.fprime_nonpos_below_1);
  CHECK(dec.fprime_nondecreasing);

  auto c = Nonlinearity::constant(2.5);
  CHECK(c.f(123.0) == 2.5);
  CHECK(c.lipschitz_const == 0.0);
  CHECK(c.fprime_nondecreasing);
  CHECK(c.fprime_nonpos_below_1);

  try {
    Nonlinearity::make([](double t) { return t * t; }, nullptr, 1.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidNonlinearity);
  }
}

TEST_CASE("growth constant relates g' to f' on the unit interval") {
  auto id = Nonlinearity::make([](double t) { return t; }, [](double) { return 1.0; });
  double C = id.growth_constant(YoungFunction::power(3));
  CHECK(C == doctest::Approx(6.0).epsilon(0.02));  // g'(t) = 6t on (0,1)

  CHECK(std::isinf(Nonlinearity::constant(1.0).growth_constant(YoungFunction::power(3))));
}

TEST_CASE("ball geometry pads the domain and lands the boundary on nodes") {
  Problem p = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 64, Nonlinearity::constant(1.0));
  CHECK(p.box_halfwidth() == doctest::Approx(63.0 / 55.0).epsilon(1e-15));
  GridField blank = p.blank_field();
  CHECK(std::fabs(blank.node_point(4).x[0] + 1.0) <= 1e-14);
  CHECK(std::fabs(blank.node_point(59).x[0] - 1.0) <= 1e-14);

  std::vector<int> mask = p.interior_mask();
  REQUIRE(!mask.empty());
  CHECK(mask.front() == 5);
  CHECK(mask.back() == 58);
  for (int idx : mask) CHECK(std::fabs(blank.node_point(idx).x[0]) < 1.0);

  Problem p2 = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 32, Nonlinearity::constant(1.0), 2);
  GridField b2 = p2.blank_field();
  for (int idx : mask) (void)idx;
  for (int idx : p2.interior_mask()) {
    int i = idx / b2.extents()[1], j = idx % b2.extents()[1];
    CHECK(b2.node_point(i, j).norm() < 1.0);
    CHECK(i >= 2);
    CHECK(j >= 2);
    CHECK(i <= b2.extents()[0] - 3);
    CHECK(j <= b2.extents()[1] - 3);
  }

  CHECK_THROWS_AS(Problem::ball(YoungFunction::power(3), 0.5, 1.0, 8,
                                Nonlinearity::constant(1.0)),
                  Error);
  CHECK_THROWS_AS(Problem::ball(YoungFunction::power(3), 0.5, -1.0,
                                64, Nonlinearity::constant(1.0)),
                  Error);
}

TEST_CASE("residuals reproduce the worked zero-candidate values") {
  Problem p = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 32, Nonlinearity::constant(1.0));
  GridField zero = p.blank_field();
  auto [r1, s1] = residual(p, zero);
  CHECK(s1 == 1.0);
  for (double v : r1) CHECK(v == -1.0);

  Problem p0 = p;
  p0.f = Nonlinearity::constant(0.0);
  auto [r0, s0] = residual(p0, zero);
  CHECK(s0 == 0.0);
  for (double v : r0) CHECK(v == 0.0);

  // candidates must vanish off the mask and match the geometry
  std::vector<double> dirty(zero.data());
  dirty[1] = 0.5;
  GridField bad(1, zero.origin(), zero.spacing(), zero.extents(), dirty, ExteriorModel::zero());
  CHECK_THROWS_AS(residual(p, bad), Error);
  GridField wrong(1, Point::of(0.0), 0.1, {16, 1}, std::vector<double>(16, 0.0),
                  ExteriorModel::zero());
  CHECK_THROWS_AS(residual(p, wrong), Error);
}

TEST_CASE("zero forcing converges immediately to the zero solution") {
  Problem p = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 32, Nonlinearity::constant(0.0));
  Solution s = solve_dirichlet(p);
  CHECK(s.converged);
  CHECK(s.iterations == 1);
  CHECK(s.history.size() == 1);
  CHECK(s.final_residual == 0.0);
  for (double v : s.field.data()) CHECK(v == 0.0);
}

TEST_CASE("the unit-ball problem solves to a positive even unimodal profile") {
  Problem p = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 64, Nonlinearity::constant(1.0));
  Solution s = solve_dirichlet(p);
  REQUIRE(s.converged);
  CHECK(s.final_residual <= s.tol_used);
  CHECK(s.tol_used == doctest::Approx(2e-6).epsilon(1e-12));

  // frozen self-oracle: same problem solved when the scheme was first brought
  // up; deterministic quadrature makes this a regression anchor
  CHECK(s.field.value(Point::of(0.0)) == doctest::Approx(0.41468381).epsilon(1e-5));

  double mn = 1e300, asym = 0.0;
  for (int i = 0; i <= 400; ++i) {
    double x = -1.0 + 2.0 * i / 400.0;
    double v = s.field.value(Point::of(x));
    mn = std::min(mn, v);
    asym = std::max(asym, std::fabs(v - s.field.value(Point::of(-x))));
  }
  CHECK(mn >= -10.0 * s.tol_used);
  CHECK(asym <= 1e-9);
  for (int i = 0; i < 200; ++i) {
    double a = -1.0 + i / 200.0, b = a + 1.0 / 200.0;  // toward the center
    CHECK(s.field.value(Point::of(b)) >= s.field.value(Point::of(a)) - 1e-8);
  }

  // every iterate stayed pinned outside the mask
  std::vector<char> in_mask(s.field.data().size(), 0);
  for (int idx : s.mask) in_mask[static_cast<size_t>(idx)] = 1;
  for (size_t i = 0; i < s.field.data().size(); ++i)
    if (!in_mask[i]) CHECK(s.field.data()[i] == 0.0);

  // accepted-step residuals never increase
  double prev = 1e300;
  for (const auto& h : s.history)
    if (h.accepted) {
      CHECK(h.sup_residual <= prev);
      prev = h.sup_residual;
    }

  // an asymmetric initial guess lands on the same solution
  SolveConfig cfg;
  cfg.init = bump_field(1, Point::of(0.3), 0.5);
  Solution s2 = solve_dirichlet(p, cfg);
  REQUIRE(s2.converged);
  double d = 0.0;
  for (int i = 0; i <= 400; ++i) {
    double x = -1.0 + 2.0 * i / 400.0;
    d = std::max(d, std::fabs(s2.field.value(Point::of(x)) - s.field.value(Point::of(x))));
  }
  CHECK(d <= 1e-6);
}

TEST_CASE("an overshooting initial guess is damped, not fatal") {
  // A scaled bump makes the first proposal's residual far worse than the
  // initial one; the step must shrink and recover instead of aborting.
  Problem p = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 64, Nonlinearity::constant(1.0));
  SolveConfig cfg;
  cfg.init = std::make_shared<SumField>(std::vector<double>{5.0},
                                        std::vector<FieldPtr>{bump_field(1, Point::of(0.3), 0.2)});
  Solution s = solve_dirichlet(p, cfg);
  CHECK(s.converged);
  bool saw_rejection = false;
  for (const auto& h : s.history) saw_rejection = saw_rejection || !h.accepted;
  CHECK(saw_rejection);
  CHECK(s.field.value(Point::of(0.0)) == doctest::Approx(0.41468381).epsilon(1e-4));
}

TEST_CASE("an unstable forcing stalls the step search") {
  auto runaway = Nonlinearity::make([](double t) { return 10.0 + 100.0 * t; },
                                    [](double) { return 100.0; });
  Problem p = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 32, runaway);
  try {
    solve_dirichlet(p);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StalledStep);
  }
}

TEST_CASE("non-finite forcing is reported as divergence") {
  Nonlinearity nasty;
  nasty.f = [](double t) { return t > 0.5 ? std::nan("") : 0.0; };
  Problem p = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 32, nasty);
  SolveConfig cfg;
  cfg.init = constant_field(1, 1.0);
  try {
    solve_dirichlet(p, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Diverged);
  }
}

TEST_CASE("refinement study reports levels, differences, and orders") {
  Problem p0 = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 32, Nonlinearity::constant(0.0));
  ConvergenceReport r0 = refine_study(p0, 2);
  REQUIRE(r0.levels.size() == 2);
  CHECK(r0.levels[1].sup_diff_prev == 0.0);
  CHECK(r0.orders.empty());

  Problem p1 = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 32, Nonlinearity::constant(1.0));
  ConvergenceReport r1 = refine_study(p1, 2);
  CHECK(r1.levels[0].grid_n == 32);
  CHECK(r1.levels[1].grid_n == 64);
  CHECK(r1.levels[1].h < r1.levels[0].h);
  CHECK(r1.levels[1].sup_diff_prev > 0.0);
  CHECK(r1.levels[1].sup_diff_prev_interior <= r1.levels[1].sup_diff_prev);
  CHECK(r1.levels[1].center_value == doctest::Approx(0.41468381).epsilon(1e-4));

  CHECK_THROWS_AS(refine_study(p1, 1), Error);
}
