#include "fracg/qualitative.hpp"

#include <cmath>
#include <memory>

#include "doctest.h"
#include "fracg/util.hpp"

using namespace fracg;

namespace {

OperatorParams quick_params(double s = 0.5) {
  OperatorParams p;
  p.s = s;
  return p;
}

// One shared desk-scale solve: ball radius 1, power(3), s = 0.5, f == 1.
const Solution& solved64() {
  static Solution sol = [] {
    Problem prob = Problem::ball(YoungFunction::power(3), 0.5, 1.0, 64,
                                 Nonlinearity::constant(1.0));
    return solve_dirichlet(prob);
  }();
  return sol;
}

FieldPtr solved64_field() { return std::make_shared<GridField>(solved64().field); }

}  // namespace

TEST_CASE("antisymmetric pair values cancel bitwise") {
  auto u = gaussian_field(1, 1.0, Point::of(0.3));
  ReflectionFrame fr{0, -0.2, ReflectionFrame::HalfSpace::Below};
  AntisymmetricField w(u, fr);

  int bad = 0;
  for (int i = 1; i <= 1000; ++i) {
    Point p = Point::of(2.0 * halton(i, 2) - 1.0);
    auto [a, b] = w.pair_values(p);
    if (a + b != 0.0 || b != -a) ++bad;
  }
  CHECK(bad == 0);

  // On the plane the mirror is the point itself, so w vanishes exactly.
  CHECK(w.value(Point::of(-0.2)) == 0.0);
  // Direct evaluation at the mirrored point only matches to rounding (the
  // double reflection is not an exact float identity); pair_values exists
  // precisely so audits never rely on this.
  CHECK(std::fabs(w.value(fr.mirror(Point::of(0.7))) + w.value(Point::of(0.7))) <= 1e-12);

  CHECK(fr.in_half_space(Point::of(-0.5)));
  CHECK(!fr.in_half_space(Point::of(-0.2)));
  CHECK(!fr.in_half_space(Point::of(0.1)));

  try {
    AntisymmetricField(nullptr, fr);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
  try {
    AntisymmetricField(u, ReflectionFrame{1, 0.0, ReflectionFrame::HalfSpace::Below});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
}

TEST_CASE("probe sets come from grid nodes or low-discrepancy points") {
  const Solution& sol = solved64();
  ProbeSet grid_probes = make_probes(sol.field, sol.mask);
  CHECK(grid_probes.points.size() == sol.mask.size());
  for (size_t k = 0; k < grid_probes.points.size(); ++k) {
    Point node = sol.field.node_point(sol.mask[k]);  // 1-d: flat index == i
    CHECK(grid_probes.points[k].x[0] == node.x[0]);
  }

  ProbeSet ball = make_probes(2, 1.5, 600);
  CHECK(ball.points.size() == 600);
  for (const Point& p : ball.points)
    CHECK(p.x[0] * p.x[0] + p.x[1] * p.x[1] < 1.5 * 1.5);

  ProbeSet box = make_probes(1, 2.0, 100, false);
  CHECK(box.points.size() == 100);
  for (const Point& p : box.points) CHECK(std::fabs(p.x[0]) <= 2.0);

  try {
    make_probes(3, 1.0, 10);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
  try {
    make_probes(1, 1.0, 0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
  try {
    make_probes(sol.field, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyMask);
  }
}

TEST_CASE("operator difference matches a direct two-evaluation recomputation") {
  auto Y = YoungFunction::power(3);
  auto u = gaussian_field(1, 1.0, Point::of(0.2));
  ReflectionFrame fr{0, -0.1, ReflectionFrame::HalfSpace::Below};
  OperatorParams prm = quick_params();

  Point x = Point::of(-0.45);
  double d = operator_difference(Y, u, fr, x, prm);
  double direct = eval_fracg(Y, *reflect(u, fr.lambda, fr.axis), x, prm) -
                  eval_fracg(Y, *u, x, prm);
  CHECK(d == direct);

  // Reflection compatibility: evaluating the reflected field equals
  // evaluating the original at the mirrored point (radial kernel).
  double lhs = eval_fracg(Y, *reflect(u, fr.lambda, fr.axis), x, prm);
  double rhs = eval_fracg(Y, *u, fr.mirror(x), prm);
  CHECK(std::fabs(lhs - rhs) <= 1e-6 * (1.0 + std::fabs(rhs)));
}

TEST_CASE("max principle audit accepts nonnegative data and names violated hypotheses") {
  auto Y = YoungFunction::power(3);
  OperatorParams prm = quick_params();

  auto c = constant_field(1, 1.0);
  MPReport rep = check_max_principle(Y, c, 1.0, prm, 1e-8, 64);
  CHECK(rep.pass);
  CHECK(rep.worst_value == 1.0);
  CHECK(!rep.rigidity_warning);

  // A negative bump has operator < 0 near its minimum: hypothesis, not verdict.
  auto neg = std::make_shared<SumField>(std::vector<double>{-1.0},
                                        std::vector<FieldPtr>{bump_field(1, Point::of(0.0), 0.5)});
  try {
    check_max_principle(Y, neg, 1.0, prm, 1e-8, 64);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisViolated);
  }

  try {
    check_max_principle(Y, c, 1.0, prm, 0.0, 64);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
}

TEST_CASE("max principle audit passes the solved Dirichlet field") {
  const Solution& sol = solved64();
  REQUIRE(sol.converged);
  MPReport rep = check_max_principle(YoungFunction::power(3), sol.field, sol.mask,
                                     quick_params(), 1e-6);
  CHECK(rep.pass);
  CHECK(rep.worst_value >= -1e-5);
  CHECK(rep.worst_value == doctest::Approx(6.779e-2).epsilon(0.02));
  CHECK(rep.context.find("54") != std::string::npos);
}

TEST_CASE("fields with genuinely negative interiors never pass the max principle audit") {
  auto Y = YoungFunction::power(3);
  OperatorParams prm = quick_params();
  std::vector<FieldPtr> liars = {
      std::make_shared<SumField>(std::vector<double>{1.0, -0.5},
                                 std::vector<FieldPtr>{gaussian_field(1), constant_field(1, 1.0)}),
      std::make_shared<SumField>(std::vector<double>{-1.0},
                                 std::vector<FieldPtr>{gaussian_field(1, 1.0, Point::of(0.4))}),
      std::make_shared<SumField>(
          std::vector<double>{1.0, -2.0},
          std::vector<FieldPtr>{parabolic_cap_field(1), bump_field(1, Point::of(-0.3), 0.2)}),
  };
  for (const auto& u : liars) {
    bool accepted = false;
    try {
      MPReport rep = check_max_principle(Y, u, 1.0, prm, 1e-8, 64);
      accepted = rep.pass;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::HypothesisViolated);
    }
    CHECK(!accepted);
  }
}

TEST_CASE("antisymmetric audit is rigorous about the even case") {
  auto Y = YoungFunction::power(3);
  OperatorParams prm = quick_params();
  ReflectionFrame fr{0, 0.0, ReflectionFrame::HalfSpace::Below};

  MPReport rep = check_antisymmetric_mp(Y, gaussian_field(1), fr, 1.0, prm, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.worst_value == 0.0);
  CHECK(rep.rigidity_warning);    // w vanishes at interior probes
  CHECK(rep.rigidity_vanishes);   // and everywhere else on the probe set
  CHECK(rep.boundedness_assumed); // half-space audit cannot see infinity
}

TEST_CASE("antisymmetric audit passes one-sided mass with a vacuous operator hypothesis") {
  auto Y = YoungFunction::power(3);
  OperatorParams prm = quick_params();
  ReflectionFrame fr{0, 0.0, ReflectionFrame::HalfSpace::Below};

  // All mass right of the plane: w >= 0 on the left, so the conditioned
  // operator-difference hypothesis has nothing to check.
  MPReport rep = check_antisymmetric_mp(Y, bump_field(1, Point::of(0.5), 0.3), fr, 1.0, prm, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.worst_value >= 0.0);
  CHECK(rep.context.find("0 of 0 negative-w probes") != std::string::npos);
  CHECK(!rep.rigidity_vanishes);
}

TEST_CASE("antisymmetric audit passes the solved field at an interior plane") {
  MPReport rep = check_antisymmetric_mp(YoungFunction::power(3), solved64_field(),
                                        ReflectionFrame{0, -0.3, ReflectionFrame::HalfSpace::Below},
                                        1.0, quick_params(), 1e-5);
  CHECK(rep.pass);
  CHECK(rep.worst_value >= -1e-5);
  CHECK(rep.boundedness_assumed);
  // Rigidity keys off the audited half-space probes, not fringe zeros.
  CHECK(!rep.rigidity_warning);
}

TEST_CASE("moving planes audit certifies symmetric fields") {
  auto Y = YoungFunction::power(3);
  OperatorParams prm = quick_params();

  SymmetryReport cap = moving_planes_audit(Y, parabolic_cap_field(1), 1.0, 0, {}, prm, 1e-6);
  CHECK(cap.pass);
  CHECK(cap.lambda0_est == 0.0);
  CHECK(cap.worst_pair_dev == 0.0);
  CHECK(cap.monotone_ok);
  CHECK(cap.lambda_step == doctest::Approx(0.95 / 39.0).epsilon(1e-12));
  CHECK(cap.lambda_minima.size() == 40);
  CHECK(cap.lambda_minima.back().first == 0.0);

  SymmetryReport sol = moving_planes_audit(Y, solved64_field(), 1.0, 0, {}, prm, 1e-5);
  CHECK(sol.pass);
  CHECK(sol.lambda0_est == 0.0);
  CHECK(sol.worst_pair_dev <= 1e-9);
  CHECK(sol.monotone_ok);

  SymmetryReport cap2 = moving_planes_audit(Y, parabolic_cap_field(2), 1.0, 1, {}, prm, 1e-6);
  CHECK(cap2.pass);
  CHECK(cap2.lambda0_est == 0.0);
}

TEST_CASE("moving planes audit localizes asymmetry") {
  auto Y = YoungFunction::power(3);
  OperatorParams prm = quick_params();

  // Mass on the scanned side stalls the plane strictly before the center.
  SymmetryReport left = moving_planes_audit(Y, bump_field(1, Point::of(-0.3), 0.15), 1.0, 0, {},
                                            prm, 1e-6);
  CHECK(!left.pass);
  CHECK(left.lambda0_est < 0.0);
  CHECK(left.lambda0_est == doctest::Approx(-0.3167).epsilon(0.08));

  // Mass on the far side keeps every w_lambda >= 0 (the plane reaches the
  // center), so the failure must surface through the mirrored pairs.
  SymmetryReport right = moving_planes_audit(Y, bump_field(1, Point::of(0.3), 0.15), 1.0, 0, {},
                                             prm, 1e-6);
  CHECK(!right.pass);
  CHECK(right.lambda0_est == 0.0);
  CHECK(right.worst_pair_dev == doctest::Approx(1.0).epsilon(1e-6));

  // Signed-stall consistency: exactly one orientation stalls, and the stall
  // magnitude is resolution-limited, not orientation-limited.
  CHECK(((left.lambda0_est < 0.0) != (right.lambda0_est < 0.0)));
  CHECK(std::fabs(left.lambda0_est) > left.lambda_step);
}

TEST_CASE("moving planes audit rejects fields without a sign") {
  auto Y = YoungFunction::power(3);
  OperatorParams prm = quick_params();
  try {
    moving_planes_audit(Y, constant_field(1, 0.0), 1.0, 0, {}, prm, 1e-6);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositive);
  }
  try {
    moving_planes_audit(Y, constant_field(1, -1.0), 1.0, 0, {}, prm, 1e-6);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositive);
  }
  try {
    moving_planes_audit(Y, parabolic_cap_field(1), 1.0, 2, {}, prm, 1e-6);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
}

TEST_CASE("boundary probe reports when minimizers ignore the limit plane") {
  BoundaryProbeReport rep = boundary_estimate_probe(YoungFunction::power(3), solved64_field(),
                                                    1.0, 0, 0.0, 6, quick_params());
  CHECK(rep.verdict == "hypotheses not met");
  CHECK(rep.eps0 == 0.0);
  REQUIRE(rep.entries.size() == 6);
  for (const auto& e : rep.entries) {
    CHECK(!e.skipped);
    CHECK(e.w_min < 0.0);
    CHECK(e.delta_j > 0.5);  // far-rim minimizers, nowhere near the plane
  }
  CHECK(rep.context.find("approach") != std::string::npos);
}

TEST_CASE("boundary probe turns consistent when the minimizers hug the plane") {
  // A sharp bump sitting on the plane pins the minimizers next to it.
  auto u = std::make_shared<SumField>(
      std::vector<double>{1.0, 0.4},
      std::vector<FieldPtr>{parabolic_cap_field(1), bump_field(1, Point::of(-0.2), 0.04)});
  OperatorParams prm = quick_params();
  auto Y = YoungFunction::power(3);

  BoundaryProbeReport rep = boundary_estimate_probe(Y, u, 1.0, 0, -0.2, 5, prm);
  CHECK(rep.verdict == "consistent");
  CHECK(rep.eps0 > 0.0);
  REQUIRE(rep.entries.size() == 5);
  for (const auto& e : rep.entries) {
    CHECK(!e.skipped);
    CHECK(e.w_min < 0.0);
    CHECK(e.q_j < 0.0);
    CHECK(e.delta_j > 0.0);
    CHECK(e.delta_j <= 0.05);
    // q_j is exactly the operator difference divided by the distance.
    ReflectionFrame fr{0, e.lambda_j, ReflectionFrame::HalfSpace::Below};
    double opdiff = operator_difference(Y, u, fr, e.x_j, prm);
    CHECK(std::fabs(e.q_j * e.delta_j - opdiff) <= 1e-12 * std::fabs(opdiff));
  }
  CHECK(rep.eps0 == doctest::Approx(1.0332e4).epsilon(0.01));
}

TEST_CASE("boundary probe skips exact on-plane minimizers instead of dividing by zero") {
  // Spike grid: lambda_1 = -0.05 + 0.1/2 lands exactly on the node at 0,
  // where w == 0 is the (tied) minimum.
  std::vector<double> data(33, 0.0);
  data[16] = 1.0;
  auto spike = std::make_shared<GridField>(1, Point::of(-2.0), 0.125, std::array<int, 2>{33, 1},
                                           data, ExteriorModel::zero());
  BoundaryProbeReport rep = boundary_estimate_probe(YoungFunction::power(3), spike, 2.0, 0,
                                                    -0.05, 2, quick_params());
  REQUIRE(rep.entries.size() == 2);
  CHECK(rep.entries[0].skipped);
  CHECK(rep.entries[0].lambda_j == 0.0);
  CHECK(rep.entries[0].delta_j == 0.0);
  CHECK(rep.entries[0].w_min == 0.0);
  CHECK(!rep.entries[1].skipped);
  CHECK(rep.entries[1].w_min < 0.0);
  CHECK(rep.context.find("skipped") != std::string::npos);

  try {
    boundary_estimate_probe(YoungFunction::power(3), spike, 2.0, 0, -3.5, 2, quick_params());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyMask);
  }
}

TEST_CASE("liouville probe separates constants, noise, and honest unknowns") {
  auto Y = YoungFunction::power(3);
  OperatorParams prm = quick_params();

  LiouvilleReport c = liouville_probe(Y, constant_field(1, 5.0), {1.0, 2.0, 4.0}, prm, 1e-6);
  CHECK(c.verdict == LiouvilleReport::Verdict::Pass);
  REQUIRE(c.entries.size() == 3);
  for (const auto& e : c.entries) {
    CHECK(e.sup_op <= 1e-10);
    CHECK(e.osc == 0.0);
  }

  LiouvilleReport b = liouville_probe(Y, bump_field(1, Point::of(0.0), 0.5), {1.0, 2.0}, prm, 1e-6);
  CHECK(b.verdict == LiouvilleReport::Verdict::Inconclusive);
  CHECK(b.entries[0].sup_op > 1e-6);
  CHECK(b.context.find("inconclusive (truncated domain)") != std::string::npos);

  // Noisy constant: the operator amplifies node-scale noise, so the probe
  // must refuse to certify constancy rather than pass on small oscillation.
  Rng rng(7);
  std::vector<double> noisy(65);
  for (double& v : noisy) v = 5.0 + 0.01 * (2.0 * rng.uniform01() - 1.0);
  auto g = std::make_shared<GridField>(1, Point::of(-4.0), 0.125, std::array<int, 2>{65, 1},
                                       noisy, ExteriorModel::power_decay(5.0, 0.0));
  LiouvilleReport n = liouville_probe(Y, g, {1.0, 2.0}, prm, 1e-6);
  CHECK(n.verdict == LiouvilleReport::Verdict::Inconclusive);
  CHECK(n.entries[0].sup_op > 1e-3);  // operator sees the noise well above tol

  // A growing tail model is outside the boundedness hypothesis entirely.
  auto grow = std::make_shared<AnalyticField>(
      1, [](const Point& p) { return std::sqrt(1.0 + p.norm2()); }, nullptr,
      DecayBound{2.0, -0.5, 1.0}, "sqrt growth");
  LiouvilleReport gr = liouville_probe(Y, grow, {1.0}, prm, 1e-6);
  CHECK(gr.verdict == LiouvilleReport::Verdict::Inconclusive);
  CHECK(gr.context.find("growth") != std::string::npos);
  REQUIRE(gr.entries.size() == 1);
  CHECK(gr.entries[0].sup_op == 0.0);  // not evaluated, not claimed
  CHECK(gr.entries[0].osc > 0.1);

  try {
    liouville_probe(Y, constant_field(1, 1.0), {}, prm, 1e-6);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
}

TEST_CASE("whole space symmetry probe detects the center before judging radiality") {
  auto Y = YoungFunction::power(3);
  OperatorParams prm = quick_params();

  SymmetryReport radial = whole_space_symmetry_probe(Y, power_decay_field(1, 1.0, 4.0), prm, 1e-8);
  CHECK(radial.pass);
  CHECK(radial.worst_pair_dev == 0.0);
  CHECK(radial.monotone_ok);

  SymmetryReport shifted = whole_space_symmetry_probe(Y, gaussian_field(1, 1.0, Point::of(0.37)),
                                                      prm, 1e-8);
  CHECK(shifted.pass);
  CHECK(shifted.worst_pair_dev <= 1e-10);
  CHECK(shifted.context.find("0.37") != std::string::npos);

  auto asym = std::make_shared<SumField>(
      std::vector<double>{1.0, 0.2},
      std::vector<FieldPtr>{parabolic_cap_field(1), bump_field(1, Point::of(0.5), 0.3)});
  SymmetryReport bad = whole_space_symmetry_probe(Y, asym, prm, 1e-3);
  CHECK(!bad.pass);
  CHECK(bad.worst_pair_dev > 1e-2);

  SymmetryReport plane = whole_space_symmetry_probe(
      Y, gaussian_field(2, 1.0, Point::of(0.2, -0.1)), prm, 1e-8);
  CHECK(plane.pass);
  CHECK(plane.worst_pair_dev <= 1e-10);
}
