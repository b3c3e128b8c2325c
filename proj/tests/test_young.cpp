#include <cmath>
#include <vector>

#include "doctest.h"
#include "fracg/young.hpp"

using namespace fracg;

namespace {
std::vector<YoungFunction> builtins() {
  return {YoungFunction::power(3.0), YoungFunction::power(4.0),
          YoungFunction::double_phase(3.0, 4.0), YoungFunction::power_log(3.0)};
}
}  // namespace

TEST_CASE("power family evaluates its closed forms") {
  auto y = YoungFunction::power(3.0);
  CHECK(y.G(2.0) == doctest::Approx(8.0));
  CHECK(y.g(2.0) == doctest::Approx(12.0));
  CHECK(y.gprime(2.0) == doctest::Approx(12.0));
  CHECK(y.p_minus() == 3.0);
  CHECK(y.p_plus() == 3.0);

  auto dp = YoungFunction::double_phase(3.0, 4.0);
  CHECK(dp.g(2.0) == doctest::Approx(3.0 * 4.0 + 4.0 * 8.0));
  CHECK(dp.G(2.0) == doctest::Approx(8.0 + 16.0));

  auto pl = YoungFunction::power_log(3.0);
  CHECK(pl.G(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(pl.g(1.0) == doctest::Approx(3.0 * std::log(2.0) + 0.5));
}

TEST_CASE("builtin construction rejects invalid exponents") {
  CHECK_THROWS_AS(YoungFunction::power(2.0), Error);
  CHECK_THROWS_AS(YoungFunction::power(-1.0), Error);
  CHECK_THROWS_AS(YoungFunction::double_phase(3.0, 3.0), Error);
  CHECK_THROWS_AS(YoungFunction::double_phase(4.0, 3.0), Error);
  CHECK_THROWS_AS(YoungFunction::power_log(1.5), Error);
  CHECK_THROWS_AS(make_builtin(YoungFamily::Power, {3.0, 4.0}), Error);
  CHECK_THROWS_AS(make_builtin(YoungFamily::DoublePhase, {3.0}), Error);
}

TEST_CASE("odd extension of g is exact to the bit") {
  Rng rng(11);
  for (const auto& y : builtins()) {
    for (int i = 0; i < 200; ++i) {
      double t = rng.sign() * rng.log_uniform(1e-6, 1e6);
      CHECK(y.g(-t) == -y.g(t));
    }
    CHECK(y.g(0.0) == 0.0);
  }
}

TEST_CASE("G is convex along random secants") {
  Rng rng(12);
  for (const auto& y : builtins()) {
    for (int i = 0; i < 2000; ++i) {
      double t1 = rng.log_uniform(1e-6, 1e4);
      double t2 = rng.log_uniform(1e-6, 1e4);
      double th = rng.uniform01();
      double lhs = y.G(th * t1 + (1.0 - th) * t2);
      double rhs = th * y.G(t1) + (1.0 - th) * y.G(t2);
      CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("central differences of G converge to g at second order") {
  for (const auto& y : builtins()) {
    for (double t : {0.5, 1.0, 3.0, 10.0}) {
      double h1 = 1e-3 * t, h2 = h1 / 2.0;
      double e1 = std::fabs((y.G(t + h1) - y.G(t - h1)) / (2.0 * h1) - y.g(t));
      double e2 = std::fabs((y.G(t + h2) - y.G(t - h2)) / (2.0 * h2) - y.g(t));
      double order = std::log2(e1 / e2);
      CHECK(order >= 1.9);
    }
  }
}

TEST_CASE("index sandwich and doubling hold on log samples") {
  Rng rng(13);
  for (const auto& y : builtins()) {
    double lo = y.p_minus() - 1.0, hi = y.p_plus() - 1.0;
    for (int i = 0; i < 2000; ++i) {
      double t = rng.log_uniform(1e-6, 1e6);
      double r = t * y.gprime(t) / y.g(t);
      CHECK(r >= lo * (1.0 - 1e-9));
      CHECK(r <= hi * (1.0 + 1e-9));
      CHECK(y.g(2.0 * t) <= std::pow(2.0, y.p_plus() - 1.0) * y.g(t) * (1.0 + 1e-11));
      CHECK(y.G(2.0 * t) <= std::pow(2.0, y.p_plus()) * y.G(t) * (1.0 + 1e-11));
    }
  }
}

TEST_CASE("estimate_indices recovers closed-form and oracle values") {
  auto p3 = estimate_indices(YoungFunction::power(3.0), 1e-6, 1e6, 1000);
  CHECK(p3.first == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(p3.second == doctest::Approx(3.0).epsilon(1e-6));
  auto p4 = estimate_indices(YoungFunction::power(4.0), 1e-6, 1e6, 1000);
  CHECK(p4.first == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(p4.second == doctest::Approx(4.0).epsilon(1e-6));

  auto dp = estimate_indices(YoungFunction::double_phase(3.0, 4.0), 1e-6, 1e6, 4096);
  // dense-grid oracle: (3.0000013333, 3.9999992500)
  CHECK(std::fabs(dp.first - 3.0000013333) < 1e-5);
  CHECK(std::fabs(dp.second - 3.9999992500) < 1e-5);

  auto pl = estimate_indices(YoungFunction::power_log(3.0), 1e-6, 1e6, 4096);
  // dense-grid oracle: (3.0706771022, 3.9999993750)
  CHECK(std::fabs(pl.first - 3.0706771022) < 1e-3);
  CHECK(std::fabs(pl.second - 3.9999993750) < 1e-3);
  CHECK(pl.first >= 3.0);
  CHECK(pl.second <= 4.0);

  // construction-time estimate over [1e-8, 1e8]; dense oracle (3.0533219176, 3.9999999937)
  auto y = YoungFunction::power_log(3.0);
  CHECK(std::fabs(y.p_minus() - 3.0533219176) < 1e-3);
  CHECK(std::fabs(y.p_plus() - 3.9999999937) < 1e-3);

  CHECK_NOTHROW(YoungFunction::power_log(2.0));  // estimated p_minus = 2.0528 > 2

  CHECK_THROWS_AS(estimate_indices(YoungFunction::power(3.0), 1e-6, 1e6, 50), Error);
  auto flat = YoungFunction::custom([](double t) { return t * t * t; }, [](double) { return 0.0; },
                                    [](double) { return 0.0; }, 2.5, 3.0, "flat");
  CHECK_THROWS_AS(estimate_indices(flat, 1e-2, 1e2, 200), Error);
}

TEST_CASE("difference bound certification matches the worked example") {
  auto y = YoungFunction::power(3.0);
  auto rep = certify_lemma22(y, 10000, 7);
  CHECK(rep.constant_used == doctest::Approx(0.25));
  CHECK(rep.n_violations == 0);
  CHECK(rep.worst_margin >= 0.0);
  // worked pair (a, b) = (0, 1): slack is g(1) - C* g(1) = 3 - 0.75
  double slack = (y.g(1.0) - y.g(0.0)) - rep.constant_used * y.g(1.0);
  CHECK(slack == doctest::Approx(2.25));

  for (const auto& yb : builtins()) {
    auto r = certify_lemma22(yb, 10000, 7);
    CHECK_MESSAGE(r.n_violations == 0, yb.label(), " worst at ", r.worst_sample);
    CHECK(r.worst_margin >= 0.0);
  }
}

TEST_CASE("increment bound certification") {
  auto y = YoungFunction::power(3.0);
  // worked pair a = b = 1: |g(2) - g(1)| = 9 <= 1 * g'(2) = 12
  CHECK(std::fabs(y.g(2.0) - y.g(1.0)) == doctest::Approx(9.0));
  CHECK(y.gprime(2.0) * 1.0 == doctest::Approx(12.0));
  for (const auto& yb : builtins()) {
    auto r = certify_lemita(yb, 10000, 8);
    CHECK_MESSAGE(r.n_violations == 0, yb.label(), " worst at ", r.worst_sample);
  }
}

TEST_CASE("mean-value point lower bound certification") {
  auto y = YoungFunction::power(3.0);
  auto rep = certify_desig(y, 10000, 9);
  CHECK(rep.constant_used == doctest::Approx(0.1875));
  CHECK(rep.n_violations == 0);
  CHECK(rep.n_flagged == 0);

  // worked pair (a, b) = (-1, 1): slope (g(1)-g(-1))/2 = 3, and 6|xi| = 3 gives |xi| = 0.5
  double m = (y.g(1.0) - y.g(-1.0)) / 2.0;
  CHECK(m == doctest::Approx(3.0));
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (y.gprime(mid) < m ? lo : hi) = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(0.5).epsilon(1e-10));

  for (const auto& yb : builtins()) {
    auto r = certify_desig(yb, 10000, 9);
    CHECK_MESSAGE(r.n_violations == 0, yb.label(), " worst at ", r.worst_sample);
  }
}

TEST_CASE("homogeneity sandwich certification") {
  for (const auto& yb : builtins()) {
    auto [rg, rG] = certify_scaling(yb, 10000, 10);
    CHECK_MESSAGE(rg.n_violations == 0, yb.label(), " g-sandwich worst at ", rg.worst_sample);
    CHECK_MESSAGE(rG.n_violations == 0, yb.label(), " G-sandwich worst at ", rG.worst_sample);
    CHECK(rG.constant_used == yb.p_plus());
  }
  // alpha = 1 degenerates to equalities; margin must be (numerically) zero
  auto y = YoungFunction::power(3.0);
  double t = 1.7;
  CHECK(y.g(1.0 * t) - std::min(1.0, 1.0) * y.g(t) == 0.0);
}

TEST_CASE("doubling sum bound certification") {
  for (const auto& yb : builtins()) {
    auto r = certify_delta2_sum(yb, 10000, 11);
    CHECK(r.constant_used == doctest::Approx(std::pow(2.0, yb.p_plus() - 1.0)));
    CHECK_MESSAGE(r.n_violations == 0, yb.label(), " worst at ", r.worst_sample);
  }
}

TEST_CASE("certification scans are deterministic under a fixed seed") {
  auto y = YoungFunction::double_phase(3.0, 4.0);
  auto a = certify_lemma22(y, 5000, 42);
  auto b = certify_lemma22(y, 5000, 42);
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.worst_sample == b.worst_sample);
  auto all = certify_all(y, 2000, 5);
  CHECK(all.size() == 6);
}
