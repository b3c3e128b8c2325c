#include "fracg/operator.hpp"

#include <cmath>

#include "doctest.h"
#include "fracg/fields.hpp"
#include "fracg/util.hpp"
#include "fracg/young.hpp"

using namespace fracg;

namespace {

GridField gaussian_grid_1d() {
  // h = 1/16 keeps every node coordinate exact in binary, so the samples and
  // node positions are bitwise mirror-symmetric about 0.
  const int nx = 129;
  const double h = 0.0625, lo = -4.0;
  std::vector<double> data(static_cast<size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    double t = lo + h * i;
    data[static_cast<size_t>(i)] = std::exp(-t * t);
  }
  return GridField(1, Point::of(lo), h, {nx, 1}, std::move(data), ExteriorModel::zero());
}

std::vector<YoungFunction> builtins() {
  std::vector<YoungFunction> Ys;
  Ys.push_back(YoungFunction::power(3));
  Ys.push_back(YoungFunction::power(4));
  Ys.push_back(YoungFunction::double_phase(3, 4));
  Ys.push_back(YoungFunction::power_log(3));
  return Ys;
}

}  // namespace

TEST_CASE("holder quotient matches the worked values") {
  auto c = constant_field(1, 3.7);
  CHECK(holder_quotient(*c, Point::of(0.2), Point::of(1.9), 0.5) == 0.0);

  AnalyticField absf(1, [](const Point& p) { return std::fabs(p.x[0]); }, nullptr,
                     DecayBound{1.0, -1.0, 1.0}, "abs");
  CHECK(holder_quotient(absf, Point::of(0.0), Point::of(1.0), 0.5) == doctest::Approx(-1.0));

  auto g = gaussian_field(2);
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    Point x{{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), 0.0}, 2};
    Point y{{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), 0.0}, 2};
    if ((x - y).norm() == 0.0) continue;
    double s = rng.uniform(0.1, 0.9);
    CHECK(holder_quotient(*g, x, y, s) == doctest::Approx(-holder_quotient(*g, y, x, s)));
  }

  try {
    holder_quotient(*g, Point{{1.0, 2.0, 0.0}, 2}, Point{{1.0, 2.0, 0.0}, 2}, 0.5);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoincidentPoints);
  }
}

TEST_CASE("the operator vanishes on constants for every built-in") {
  for (const auto& Y : builtins())
    for (double s : {0.25, 0.5, 0.75})
      for (int n : {1, 2}) {
        auto c = constant_field(n, 2.2);
        OperatorParams p;
        p.s = s;
        auto r = eval_fracg_full(Y, *c, Point{{0.1, n > 1 ? -0.2 : 0.0, 0.0}, n}, p);
        CHECK(std::fabs(r.value) <= 1e-12 * (1.0 + Y.gprime(1.0)));
        CHECK(!r.tail_ok);  // the bound cannot see the cancellation, only the size of u
      }

  // grid-backed constant with a flat power-decay exterior
  std::vector<double> data(9, 2.2);
  GridField gc(1, Point::of(-1.0), 0.25, {9, 1}, std::move(data),
               ExteriorModel::power_decay(2.2, 0.0));
  OperatorParams p;
  p.s = 0.5;
  double v = eval_fracg(YoungFunction::power(3), gc, Point::of(0.0), p);
  CHECK(std::fabs(v) <= 1e-12 * (1.0 + YoungFunction::power(3).gprime(1.0)));
}

TEST_CASE("sign at strict extrema follows the monotonicity of g") {
  auto Y = YoungFunction::power(3);
  OperatorParams p;
  p.s = 0.5;
  for (int n : {1, 2}) {
    auto bump = bump_field(n, Point::of(0.0), 1.0);
    CHECK(eval_fracg(Y, *bump, Point::of(0.0), p) > 0.0);

    SumField neg({-1.0}, {bump});
    CHECK(eval_fracg(Y, neg, Point::of(0.0), p) < 0.0);
  }
  auto cap = parabolic_cap_field(2);
  CHECK(eval_fracg(Y, *cap, Point{{0.0, 0.0, 0.0}, 2}, p) > 0.0);
}

TEST_CASE("gaussian point values match the frozen quadrature baselines") {
  // Baselines from an untruncated high-precision reference integration of
  // g((u(x)-u(y))/|x-y|^s) / |x-y|^{1+s} for u(y) = exp(-y^2) in n=1.
  auto u = gaussian_field(1);

  OperatorParams p;
  p.s = 0.5;
  auto r0 = eval_fracg_full(YoungFunction::power(3), *u, Point::of(0.0), p);
  CHECK(std::fabs(r0.value - 4.6147802663) / 4.6147802663 <= 1e-5);
  CHECK(r0.tail_ok);
  CHECK(r0.value == r0.near + r0.far);
  CHECK(r0.delta_used == 1.0);

  double r07 = eval_fracg(YoungFunction::power(3), *u, Point::of(0.7), p);
  CHECK(std::fabs(r07 - 1.2946695441) / 1.2946695441 <= 3e-4);

  OperatorParams p32 = p;
  p32.quad_near = 32;
  p32.quad_far = 32;
  double r07f = eval_fracg(YoungFunction::power(3), *u, Point::of(0.7), p32);
  CHECK(std::fabs(r07f - 1.2946695441) / 1.2946695441 <= 2e-5);

  OperatorParams p75;
  p75.s = 0.75;
  double r75 = eval_fracg(YoungFunction::power(3), *u, Point::of(0.0), p75);
  CHECK(std::fabs(r75 - 4.2078704753) / 4.2078704753 <= 1e-5);

  double rlog = eval_fracg(YoungFunction::power_log(3), *u, Point::of(0.0), p);
  CHECK(std::fabs(rlog - 2.5659005329) / 2.5659005329 <= 1e-5);
}

TEST_CASE("explicit radii are honored exactly") {
  auto u = gaussian_field(1);
  OperatorParams p;
  p.s = 0.5;
  p.delta_near = 0.5;
  p.r_far = 50.0;
  auto r = eval_fracg_full(YoungFunction::power(3), *u, Point::of(0.0), p);
  CHECK(r.delta_used == 0.5);
  CHECK(r.r_far_used == 50.0);
  CHECK(r.tail_bound > 0.0);
}

TEST_CASE("doubling the quadrature points keeps shrinking the change") {
  auto u = gaussian_field(1);
  auto at_q = [&](int q) {
    OperatorParams p;
    p.s = 0.5;
    p.quad_near = q;
    p.quad_far = q;
    return eval_fracg(YoungFunction::power(3), *u, Point::of(0.7), p);
  };
  double v8 = at_q(8), v16 = at_q(16), v32 = at_q(32), v64 = at_q(64);
  double d1 = std::fabs(v8 - v16), d2 = std::fabs(v16 - v32), d3 = std::fabs(v32 - v64);
  CHECK(d2 <= 0.5 * d1);
  CHECK(d3 <= 0.5 * d2);
}

TEST_CASE("rotating the field and the probe together leaves the value unchanged") {
  auto Y = YoungFunction::power(3);
  auto base_field = gaussian_field(2, 1.0, Point{{0.4, 0.1, 0.0}, 2});
  OperatorParams p;
  p.s = 0.5;
  Point x{{0.2, -0.3, 0.0}, 2};
  double base = eval_fracg(Y, *base_field, x, p);
  DecayBound db = base_field->decay_bound();
  for (double th : {0.7, 2.1}) {
    double c = std::cos(th), sn = std::sin(th);
    AnalyticField rotated(
        2,
        [c, sn](const Point& z) {
          Point q{{c * z.x[0] + sn * z.x[1], -sn * z.x[0] + c * z.x[1], 0.0}, 2};
          Point d = q - Point{{0.4, 0.1, 0.0}, 2};
          return std::exp(-d.norm2());
        },
        nullptr, DecayBound{db.c, db.beta, db.valid_radius + 1.0}, "rotated gaussian");
    Point qx{{c * x.x[0] - sn * x.x[1], sn * x.x[0] + c * x.x[1], 0.0}, 2};
    double vr = eval_fracg(Y, rotated, qx, p);
    CHECK(std::fabs(vr - base) / std::fabs(base) <= 1e-4);
  }
}

TEST_CASE("radial fields give equal values at equal radii") {
  auto cap = parabolic_cap_field(2);
  OperatorParams p;
  p.s = 0.5;
  double vmin = 1e300, vmax = -1e300;
  for (int k = 0; k < 8; ++k) {
    double th = 0.31 + 2.0 * 3.14159265358979323846 * k / 8.0;
    Point x{{0.35 * std::cos(th), 0.35 * std::sin(th), 0.0}, 2};
    double v = eval_fracg(YoungFunction::power(3), *cap, x, p);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  CHECK((vmax - vmin) / std::fabs(vmin) <= 1e-6);
}

TEST_CASE("kernel models scale, sandwich, and validate") {
  auto u = gaussian_field(1);
  OperatorParams p;
  p.s = 0.5;
  double plain = eval_fracg(YoungFunction::power(3), *u, Point::of(0.0), p);

  auto scaled = KernelModel::make([](double t) { return 1.3 * std::sqrt(t); }, 1.2, 1.4, 0.5,
                                  "1.3 t^s");
  double vs = eval_fracg(YoungFunction::power(3), *u, Point::of(0.0), p, scaled);
  CHECK(vs == doctest::Approx(plain / 1.3).epsilon(1e-12));

  // at a global max the integrand is one-signed, so the sandwich is an ordering
  auto bump = bump_field(1, Point::of(0.0), 1.0);
  double vb = eval_fracg(YoungFunction::power(3), *bump, Point::of(0.0), p);
  auto mixed = KernelModel::make(
      [](double t) { return std::sqrt(t) * (1.2 + 0.2 * t / (1.0 + t)); }, 1.2, 1.4, 0.5);
  double vm = eval_fracg(YoungFunction::power(3), *bump, Point::of(0.0), p, mixed);
  CHECK(vm <= vb / 1.2 + 1e-12);
  CHECK(vm >= vb / 1.4 - 1e-12);

  CHECK_THROWS_AS(KernelModel::make(
                      [](double t) { return std::sqrt(t) * (1.0 + 0.5 * std::sin(std::log(t))); },
                      0.9, 1.1, 0.5),
                  Error);

  auto k03 = KernelModel::power(0.3);
  CHECK_THROWS_AS(eval_fracg(YoungFunction::power(3), *u, Point::of(0.0), p, k03), Error);
}

TEST_CASE("grid evaluation is consistent, mirror-symmetric, and error-transparent") {
  GridField u = gaussian_grid_1d();
  auto Y = YoungFunction::power(3);
  OperatorParams p;
  p.s = 0.5;
  auto kern = KernelModel::power(0.5);

  // single node agrees with the pointwise call bitwise
  auto single = eval_on_grid(Y, u, {64}, p, kern);
  REQUIRE(single.ok());
  CHECK(single.values[0] == eval_fracg(Y, u, u.node_point(64), p));

  // mirrored nodes agree to round-off accumulation
  auto rep = eval_on_grid(Y, u, {40, 64, 88}, p, kern);
  REQUIRE(rep.ok());
  CHECK(std::fabs(rep.values[0] - rep.values[2]) <= 1e-8 * std::fabs(rep.values[0]));

  // worker count cannot change values
  auto rep2 = eval_on_grid(Y, u, {40, 64, 88}, p, kern, 2);
  for (size_t i = 0; i < rep.values.size(); ++i) CHECK(rep.values[i] == rep2.values[i]);

  CHECK_THROWS_AS(eval_on_grid(Y, u, {}, p, kern), Error);

  auto bad = eval_on_grid(Y, u, {1, 64}, p, kern);
  CHECK(!bad.ok());
  REQUIRE(bad.node_errors.size() == 1);
  CHECK(bad.node_errors[0].first == 1);
  CHECK(std::isnan(bad.values[0]));
  CHECK(!std::isnan(bad.values[1]));
}

TEST_CASE("pointwise evaluation refuses nodes without second-order control") {
  GridField u = gaussian_grid_1d();
  OperatorParams p;
  p.s = 0.5;
  try {
    eval_fracg(YoungFunction::power(3), u, u.node_point(1), p);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotC11At);
  }
}

TEST_CASE("declared growth is fatal under the analytic bound and reported otherwise") {
  AnalyticField grow(1, [](const Point& x) { return 0.01 * x.norm2(); }, nullptr,
                     DecayBound{0.01, -2.0, 1.0}, "growing");
  OperatorParams p;
  p.s = 0.5;
  try {
    eval_fracg(YoungFunction::power(3), grow, Point::of(0.0), p);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TailUnbounded);
  }

  OperatorParams pi = p;
  pi.tail_mode = TailMode::IgnoreWithReport;
  auto r = eval_fracg_full(YoungFunction::power(3), grow, Point::of(0.0), pi);
  CHECK(std::isfinite(r.value));
  CHECK(std::isinf(r.tail_bound));
  CHECK(!r.tail_ok);
}

TEST_CASE("perturbing by a bump moves the value linearly in eps") {
  auto Y = YoungFunction::power(3);
  FieldPtr u = gaussian_field(1);
  OperatorParams p;
  p.s = 0.5;

  auto zero = perturbation_gap(Y, u, Point::of(0.0), 0.0, 1.0, p);
  CHECK(zero.gap == 0.0);

  double prev = 0.0;
  for (double eps : {1e-3, 1e-2, 1e-1}) {
    auto r = perturbation_gap(Y, u, Point::of(0.0), eps, 1.0, p);
    CHECK(r.gap > prev);
    CHECK(r.gap <= r.bound * (1.0 + 1e-12));
    prev = r.gap;
  }

  // the two-eps fit predicts the quarter-eps gap to a few percent
  auto full = perturbation_gap(Y, u, Point::of(0.0), 1e-2, 1.0, p);
  auto half = perturbation_gap(Y, u, Point::of(0.0), 5e-3, 1.0, p);
  CHECK(half.gap == full.gap_half);  // same integral, deterministic
  double predicted = full.c_delta * 2.5e-3 + full.omega;
  CHECK(std::fabs(predicted - half.gap_half) <= 0.1 * half.gap_half);

  CHECK_THROWS_AS(perturbation_gap(Y, u, Point::of(0.0), -1.0, 1.0, p), Error);
  CHECK_THROWS_AS(perturbation_gap(Y, u, Point::of(0.0), 1e-2, 0.0, p), Error);
}

TEST_CASE("operator parameter validation rejects malformed requests") {
  auto check_throws = [](OperatorParams p) { CHECK_THROWS_AS(p.validate(), Error); };
  OperatorParams p;
  p.s = 0.0;
  check_throws(p);
  p = OperatorParams{};
  p.s = 1.0;
  check_throws(p);
  p = OperatorParams{};
  p.quad_near = 4;
  check_throws(p);
  p = OperatorParams{};
  p.quad_far = 7;
  check_throws(p);
  p = OperatorParams{};
  p.delta_near = 2.0;
  p.r_far = 1.0;
  check_throws(p);
  p = OperatorParams{};
  p.delta_near = -0.5;
  check_throws(p);
}
