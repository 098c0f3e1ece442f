#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qpe/errors.hpp"
#include "qpe/fisher.hpp"
#include "qpe/protocol.hpp"
#include "qpe/thermo.hpp"

using namespace qpe;

namespace {

bool throws_kind(ErrorKind k, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == k;
  }
  return false;
}

std::vector<double> squares(std::size_t n) {
  std::vector<double> f;
  for (std::size_t k = 1; k <= n; ++k) f.push_back(double(k * k));
  return f;
}

bool feasible(std::span<const double> f, const RoundPlan& p, const Target& t) {
  auto F = [&](std::size_t n) { return n == 0 ? 0.0 : f[n - 1]; };
  return p.full_rounds * F(p.steps) + F(p.tail_steps) >= t.information() - kResidualTol && p.tail_steps <= p.steps;
}

std::vector<double> field_series(double m_bar, double g = 2.5) {
  const FieldParams p{m_bar, g, 1, 1};
  const auto s = sequence_qfi(field_channel(p), BlochVector(0, 0, 1), default_n_max(n_opt_estimate_field(p)));
  return {s.values().begin(), s.values().end()};
}

}  // namespace

TEST_CASE("reps_needed") {
  CHECK(reps_needed(100, Target(1e-2)) == doctest::Approx(1.0));
  CHECK(std::abs(reps_needed(8176, Target(1e-4)) - 1.22309) < 1e-5);
  for (double f : {0.3, 7.0, 1234.5}) CHECK(reps_needed(f, Target(3e-3)) * f * 3e-3 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(throws_kind(ErrorKind::Unattainable, [] { reps_needed(0.0, Target(1e-2)); }));
  CHECK(throws_kind(ErrorKind::InputDomain, [] { Target(0.0); }));
  CHECK(throws_kind(ErrorKind::InputDomain, [] { Target(-1.0); }));
}

TEST_CASE("raw complexity") {
  const auto f = squares(64);
  const auto raw = raw_complexity(f, Target(1e-4));
  CHECK(raw.n_opt == 64);
  CHECK(raw.c == doctest::Approx(1e4 / 64));

  const auto half = raw_complexity(f, Target(2e-4));
  CHECK(half.n_opt == raw.n_opt);
  CHECK(half.c == doctest::Approx(raw.c / 2).epsilon(1e-15));

  const std::vector<double> zeros(10, 0.0);
  CHECK(throws_kind(ErrorKind::Unattainable, [&] { raw_complexity(zeros, Target(1e-2)); }));

  // (e / delta^2) Delta / m_bar at the field reference point.
  const double expected = std::numbers::e * 1e4 * delta_of_g(2.5) / 300;
  CHECK(expected == doctest::Approx(182.4).epsilon(1e-3));
  const auto field = raw_complexity(field_series(300), Target(1e-4));
  CHECK(std::abs(field.c - expected) / expected < 0.10);
}

TEST_CASE("plan_round: hand examples") {
  const std::vector<double> f5{1, 4, 9, 16, 25};
  const auto p = plan_round(f5, 5, Target(0.01));
  CHECK(p == RoundPlan{5, 4, 0});
  CHECK(p.total_gates() == 20);
  CHECK(p.rounds() == 4);
  CHECK(p.rounds(RoundCounting::Literal) == 5);

  const std::vector<double> f3{1, 4, 9};
  const auto q = plan_round(f3, 3, Target(0.1));
  CHECK(q == RoundPlan{3, 1, 1});
  CHECK(q.total_gates() == 4);
  CHECK(plan_round(f3, 2, Target(0.1)) == RoundPlan{2, 2, 2});
  CHECK(plan_round(f3, 1, Target(0.1)).total_gates() == 10);

  // q exactly an integer: delta^2 = 1 / (k F_N).
  const auto exact = plan_round(f5, 4, Target(1.0 / (7 * 16.0)));
  CHECK(exact.full_rounds == 7);
  CHECK(exact.tail_steps == 0);
}

TEST_CASE("true complexity: hand examples") {
  const std::vector<double> f3{1, 4, 9};
  const auto tc = true_complexity(f3, Target(0.1));
  CHECK(tc.gates == 4);
  CHECK(tc.steps == 3);

  const auto f = squares(40);
  const auto single = true_complexity(f, Target(1.0 / 1600));
  CHECK(single.gates == 40);
  CHECK(single.plan.full_rounds == 1);
}

TEST_CASE("true complexity equals exhaustive minimisation on random series") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t len = 1 + rng() % 30;
    std::vector<double> f;
    for (std::size_t n = 1; n <= len; ++n) {
      // Mixture of rising/decaying shapes and plain noise, some entries zero.
      const double shape = n * n * std::pow(0.9 + 0.1 * u(rng), 2.0 * n);
      f.push_back(u(rng) < 0.1 ? 0.0 : (trial % 3 == 0 ? 50 * u(rng) : shape));
    }
    if (*std::max_element(f.begin(), f.end()) <= 0) continue;
    const double info = 1 + 300 * u(rng);
    const Target t(1.0 / info);
    const auto brute = oracle::brute_true_complexity(f, t.information());
    const auto tc = true_complexity(f, t);
    CAPTURE(trial);
    CHECK(tc.gates == brute.gates);
    CHECK(tc.steps == brute.n);
    CHECK(feasible(f, tc.plan, t));
    for (std::size_t n = 1; n <= len; ++n)
      if (f[n - 1] > 0) CHECK(feasible(f, plan_round(f, n, t), t));
  }
}

TEST_CASE("true complexity exceeds raw complexity, and the gap closes as 1/m_bar grows") {
  const Target t(1e-4);
  double prev_gap = INFINITY;
  for (double m : {800.0, 400.0, 200.0, 100.0, 50.0}) {
    const auto f = field_series(m);
    const double c = raw_complexity(f, t).c;
    const double big_c = double(true_complexity(f, t).gates);
    CHECK(big_c >= c);
    const double gap = (big_c - c) / big_c;
    CAPTURE(m);
    CHECK(gap <= prev_gap + 0.02);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.05);
}

TEST_CASE("C is non-increasing in delta^2") {
  const auto f = field_series(300);
  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (double d = 1e-5; d <= 1e-2; d *= 1.15) {
    const std::size_t c = true_complexity(f, Target(d)).gates;
    CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("resource_of_plan arithmetic") {
  const auto a = resource_of_plan({5, 4, 0}, 300, 2);
  CHECK(a.gate_energy == 6000);
  CHECK(a.external_energy == 8);
  CHECK(a.total == 6008);
  CHECK(resource_of_plan({5, 4, 0}, 300, 2, RoundCounting::Literal).total == 6010);
  CHECK(resource_of_plan({3, 1, 1}, 10, 1).total == 42);
  CHECK(resource_of_plan({7, 3, 2}, 12.5, 0).total == 23 * 12.5);
}

TEST_CASE("optimal resource versus true complexity") {
  const Target t(1e-4);
  for (double m : {80.0, 300.0, 1200.0}) {
    const auto f = field_series(m);
    const auto tc = true_complexity(f, t);
    const auto zero = optimal_resource(f, t, m, 0.0);
    CHECK(zero.steps == tc.steps);
    CHECK(zero.resource.total == resource_of_plan(tc.plan, m, 0.0).total);
    for (double e : {1.0, 50.0, 1e3, 1e5}) {
      const auto r = optimal_resource(f, t, m, e);
      const double at_nc = resource_of_plan(tc.plan, m, e).total;
      CHECK(at_nc >= r.resource.total);
      if (tc.plan.rounds() == r.plan.rounds()) CHECK(at_nc == r.resource.total);
    }
  }
  // Expensive rounds push the optimum toward fewer of them.
  const auto f = field_series(300);
  const auto cheap = optimal_resource(f, t, 300, 0.0);
  const auto dear = optimal_resource(f, t, 300, 1e8);
  CHECK(dear.plan.rounds() <= cheap.plan.rounds());
}

TEST_CASE("optimal resource equals exhaustive search on small series") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t len = 2 + rng() % 25;
    std::vector<double> f;
    for (std::size_t n = 1; n <= len; ++n) f.push_back(n * n * std::pow(0.85 + 0.15 * u(rng), 2.0 * n));
    const Target t(1.0 / (1 + 200 * u(rng)));
    const double m = 1 + 100 * u(rng), e = 500 * u(rng);
    double best = INFINITY;
    std::size_t best_n = 0;
    for (std::size_t n = 1; n <= len; ++n) {
      const double total = resource_of_plan(plan_round(f, n, t), m, e).total;
      if (total < best) best = total, best_n = n;
    }
    const auto r = optimal_resource(f, t, m, e);
    CHECK(r.resource.total == best);
    CHECK(r.steps == best_n);
  }
}

TEST_CASE("sweet spot") {
  const auto s = sweet_spot(2.5, Target(1e-4));
  const double root = std::sqrt(std::numbers::e / 1e-4);
  CHECK(s.c0 == doctest::Approx(164.872).epsilon(1e-5));
  CHECK(s.m_bar0 == doctest::Approx(delta_of_g(2.5) * root).epsilon(1e-14));
  CHECK(std::abs(s.m_bar0 - 331.87) / 331.87 < 1e-3);
  CHECK(std::abs(s.r0 - 54713) / 54713 < 1e-3);

  const auto q = sweet_spot(2.5, Target(4e-4));
  CHECK(q.m_bar0 == doctest::Approx(s.m_bar0 / 2));
  CHECK(q.c0 == doctest::Approx(s.c0 / 2));
  CHECK(q.r0 == doctest::Approx(s.r0 / 4));
  CHECK(throws_kind(ErrorKind::InputDomain, [] { sweet_spot(0.0, Target(1e-4)); }));
}

TEST_CASE("resource plateau below the sweet spot") {
  const Target t(1e-4);
  const double m0 = sweet_spot(2.5, t).m_bar0;
  double lo = INFINITY, hi = 0;
  for (double m = 50; m <= m0; m *= 1.1) {
    const auto f = field_series(m);
    const double r = double(true_complexity(f, t).gates) * m;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi / lo < 1.2);
}

TEST_CASE("approximate resource with cooling") {
  const double m = 300, g = 2.5, xi = 0.2, w = 0.0033;
  const int ms = 3;
  const Target t(1e-4);
  const double d = delta_of_g(g);
  const double hand = (std::numbers::e / 1e-4) * (d * d / (m * m)) * (w * ms + m * m / d) / std::pow(std::tanh(ms / (4 * xi)), 2);
  CHECK(std::abs(approx_resource_with_cooling(m, g, t, ms, xi, w) - hand) / hand < 1e-6);
  CHECK(throws_kind(ErrorKind::InputDomain, [&] { approx_resource_with_cooling(m, g, t, 0, xi, w); }));

  // Cooling term over gate term.
  const double ratio = thermo::work_per_qubit({xi, 1, 1}) * ms * d / (m * m);
  CHECK(ratio > 1e-8 * ms);
  CHECK(ratio < 1e-6 * ms);

  // Many cooling qubits: tanh -> 1 and the gate term dominates.
  const double gate_only = (std::numbers::e / 1e-4) * d;
  CHECK(approx_resource_with_cooling(m, g, t, 40, xi, w) == doctest::Approx(gate_only).epsilon(1e-4));
}
