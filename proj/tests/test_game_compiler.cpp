#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qgames/game_compiler.hpp"
#include "qgames/solvers.hpp"
#include "support.hpp"

using namespace qgames;
using namespace qgames::testing;

namespace {

QuadraticInequality uffink_toy() {
  QuadraticInequality q;
  q.scenario = BellScenario::bipartite(2, 2);
  q.g = Eigen::VectorXd::Zero(4);
  q.h = Eigen::VectorXd::Zero(4);
  q.g(0) = 1;
  q.g(3) = 1;
  q.h(1) = 1;
  q.h(2) = -1;
  q.support = 2;
  q.bound = 4;
  return q;
}

CorrelatorTable random_table(const BellScenario& sc, RandomStream& rng) {
  Eigen::VectorXd e(static_cast<Eigen::Index>(sc.setting_tuples()));
  for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = rng.uniform(-1.0, 1.0);
  return CorrelatorTable::from_full(sc, e);
}

}  // namespace

TEST_CASE("normalization of an already normalized inequality is the identity") {
  const auto ineq = chsh_events();
  const auto n = normalize_linear(ineq);
  CHECK(n.normalized);
  CHECK(n.affine.scale == 1.0);
  CHECK(n.affine.shift == 0.0);
  CHECK(n.coeffs == ineq.coeffs);
  CHECK(n.bound == ineq.bound);
}

TEST_CASE("a single negative term keeps its violation status") {
  const auto sc = BellScenario::bipartite(2, 2);
  LinearInequality ineq;
  ineq.scenario = sc;
  ineq.coeffs = Eigen::MatrixXd::Zero(4, 4);
  ineq.coeffs(1, 2) = -1.0;
  ineq.bound = -0.4;  // P(10|01) >= 0.4
  const auto n = normalize_linear(ineq);
  CHECK(is_normalized(n));
  CHECK(n.coeffs.minCoeff() >= 0.0);
  RandomStream rng(1);
  int violated = 0;
  for (int i = 0; i < 100; ++i) {
    const auto b = random_behavior(sc, rng);
    const double before = evaluate_linear(ineq, b);
    const double after = evaluate_linear(n, b);
    CHECK((before > ineq.bound) == (after > n.bound));
    CHECK(std::abs(n.affine.invert(after) - before) < 1e-9);
    violated += before > ineq.bound;
  }
  CHECK(violated > 0);
  CHECK(violated < 100);
}

TEST_CASE("CHSH correlator form normalizes to the 3/4 game") {
  const auto lin = expand_correlator(chsh_correlators());
  const auto n = normalize_linear(lin);
  CHECK(n.affine.apply(2.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(n.bound == doctest::Approx(0.75).epsilon(1e-15));
  const auto game = compile_linear(n);
  CHECK(classical_value(game).value == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(n.affine.apply(2.0 * std::numbers::sqrt2) == doctest::Approx((2.0 + std::numbers::sqrt2) / 4.0).epsilon(1e-14));
}

TEST_CASE("compiled CHSH game values") {
  const auto game = compile_linear(normalize_linear(chsh_events()));
  CHECK(classical_value(game).value == 0.75);
  QuantumStrategy q;
  q.state = make_singlet<double>();
  q.frame = chsh_optimal_frame<double>();
  CHECK(win_probability(game, quantum_behavior(game.scenario(), q)) ==
        doctest::Approx((2.0 + std::numbers::sqrt2) / 4.0).epsilon(1e-12));
}

TEST_CASE("uniform coefficients on one setting row concentrate the source") {
  const auto sc = BellScenario::bipartite(2, 2);
  LinearInequality ineq;
  ineq.scenario = sc;
  ineq.coeffs = Eigen::MatrixXd::Zero(4, 4);
  ineq.coeffs.row(2).setConstant(0.25);
  const auto game = compile_linear(normalize_linear(ineq));
  CHECK(game.question_dist(2) == doctest::Approx(1.0));
  CHECK(game.question_dist.sum() == doctest::Approx(1.0));
  CHECK(game.question_dist(0) == 0.0);
  CHECK(game.acceptance.row(2).minCoeff() == 1.0);
}

TEST_CASE("compile_linear refuses unnormalized input") {
  auto ineq = chsh_events();
  ineq.coeffs *= 2.0;
  CHECK_THROWS_AS(compile_linear(ineq), PreconditionError);
  ineq.coeffs.setZero();
  CHECK_THROWS_AS(normalize_linear(ineq), DomainError);
}

TEST_CASE("compiler soundness on random inequalities") {
  RandomStream rng(2718);
  for (int i = 0; i < 100; ++i) {
    const auto ineq = random_linear(rng);
    const auto n = normalize_linear(ineq);
    const auto game = compile_linear(n);
    for (int k = 0; k < 5; ++k) {
      const auto b = random_behavior(ineq.scenario, rng);
      const double lhs_norm = evaluate_linear(n, b);
      CHECK(std::abs(win_probability(game, b) - lhs_norm) <= 1e-10);
      CHECK(std::abs(n.affine.invert(lhs_norm) - evaluate_linear(ineq, b)) <= 1e-9);
    }
    // Two code paths to the classical bound.
    if (deterministic_strategy_count(ineq.scenario) <= 100000)
      CHECK(std::abs(classical_value(game).value - local_bound(n)) <= 1e-12);
  }
}

TEST_CASE("augmentation with no absent slots is the identity") {
  const auto ineq = chsh_correlators();
  const auto aug = augment_sliwa(ineq);
  CHECK(aug.scenario == ineq.scenario);
  CHECK(aug.terms.size() == ineq.terms.size());
}

TEST_CASE("a one-party term gains a dummy slot and keeps its value") {
  CorrelatorInequality ineq;
  ineq.scenario = BellScenario::bipartite(2, 2);
  ineq.terms = {{1.0, {1, kAbsent}}};
  ineq.bound = 1.0;
  const auto aug = augment_sliwa(ineq);
  CHECK(aug.scenario.settings() == std::vector<int>{3, 3});
  CHECK(aug.terms[0].settings == std::vector<int>{1, 2});
  CHECK_FALSE(aug.has_absent_slots());
  RandomStream rng(40);
  for (int i = 0; i < 100; ++i) {
    const auto b = random_local_behavior(ineq.scenario, rng);
    const auto ext = extend_with_dummy(b, aug.scenario);
    CHECK(std::abs(evaluate_correlator(ineq, behavior_to_correlators(b)) -
                   evaluate_correlator(aug, behavior_to_correlators(ext))) < 1e-12);
  }
}

TEST_CASE("a tripartite inequality with 1-, 2- and 3-party terms") {
  CorrelatorInequality ineq;
  ineq.scenario = BellScenario({2, 2, 2}, {2, 2, 2});
  ineq.terms = {{1, {0, 0, 0}},       {1, {0, 1, 1}},       {1, {1, 0, 1}},        {-1, {1, 1, 0}},
                {1, {0, kAbsent, kAbsent}}, {-1, {kAbsent, 1, kAbsent}}, {0.5, {0, 0, kAbsent}}, {0.5, {kAbsent, 1, 1}}};
  ineq.bound = local_bound(ineq);
  const auto aug = augment_sliwa(ineq);
  for (const auto& t : aug.terms)
    for (int s : t.settings) CHECK(s != kAbsent);
  CHECK(aug.dummy == std::vector<int>{2, 2, 2});
  CHECK(local_bound(aug) == local_bound(ineq));
  RandomStream rng(41);
  for (int i = 0; i < 100; ++i) {
    const auto b = random_local_behavior(ineq.scenario, rng);
    CHECK(std::abs(evaluate_correlator(ineq, behavior_to_correlators(b)) -
                   evaluate_correlator(aug, behavior_to_correlators(extend_with_dummy(b, aug.scenario)))) < 1e-12);
  }
  // The compiled game of the augmented inequality has the same classical value.
  const auto n = normalize_linear(expand_correlator(aug));
  CHECK(std::abs(n.affine.invert(classical_value(compile_linear(n)).value) - ineq.bound) < 1e-12);
}

TEST_CASE("polynomial games") {
  const auto sc = BellScenario::bipartite(2, 2);
  RandomStream rng(50);
  const auto b = random_behavior(sc, rng);
  const double p0 = b.probability(0, 0);
  const double p1 = b.probability(3, 1);

  PolynomialInequality sq;
  sq.scenario = sc;
  sq.events = {{{0, 0}, {0, 0}}};
  sq.monomials = {{1.0, {2}}};
  const auto g2 = compile_polynomial(sq);
  CHECK(g2.round_plans[0] == std::vector<int>{0, 0});
  CHECK(g2.round_count_dist(2) == 1.0);
  CHECK(expected_success(g2, b) == doctest::Approx(p0 * p0).epsilon(1e-14));

  PolynomialInequality mix;
  mix.scenario = sc;
  mix.events = {{{0, 0}, {0, 0}}, {{1, 1}, {0, 1}}};
  mix.monomials = {{0.5, {1, 0}}, {0.5, {0, 1}}};
  const auto g1 = compile_polynomial(mix);
  CHECK(g1.round_count_dist.size() == 2);
  CHECK(g1.round_count_dist(1) == 1.0);
  CHECK(expected_success(g1, b) == doctest::Approx(0.5 * p0 + 0.5 * p1).epsilon(1e-14));

  PolynomialInequality bad = mix;
  bad.monomials[0].coeff = -0.5;
  CHECK_THROWS_AS(normalize_polynomial(bad), DomainError);
  bad.monomials[0].coeff = 2.0;
  CHECK_THROWS_AS(compile_polynomial(bad), PreconditionError);
  const auto fixed = normalize_polynomial(bad);
  CHECK(fixed.monomials[0].coeff == doctest::Approx(0.8));
}

TEST_CASE("polynomial game Monte Carlo converges to the formula") {
  const auto sc = BellScenario::bipartite(2, 2);
  RandomStream rng(51);
  PolynomialInequality p;
  p.scenario = sc;
  p.events = {{{0, 0}, {0, 0}}, {{0, 1}, {1, 1}}, {{1, 0}, {0, 1}}};
  p.monomials = {{0.2, {1, 1, 0}}, {0.5, {0, 2, 1}}, {0.3, {1, 0, 0}}};
  const auto game = compile_polynomial(p);
  const auto b = random_behavior(sc, rng);
  const auto mc = monte_carlo_value(game, b, 200000, 9);
  CHECK(std::abs(mc.value - evaluate_polynomial(p, b)) <= 4.0 * mc.std_error);
  CHECK(std::abs(expected_success(game, b) - evaluate_polynomial(p, b)) < 1e-14);
}

TEST_CASE("Uffink selector and circle") {
  const auto q = uffink_toy();
  CHECK(compile_uffink(q, 0.9, 0.9).selector->prob_g == doctest::Approx(0.5));
  CHECK(compile_uffink(q, 1.0, 0.75).selector->prob_g == doctest::Approx(1.0 / 1.75));
  CHECK_NOTHROW(compile_uffink(q, 1.0, 1.0));
  CHECK_THROWS_AS(compile_uffink(q, 0.5, 0.5), PreconditionError);
}

TEST_CASE("uffink_point") {
  const auto q = uffink_toy();
  const auto zero = uffink_point(CorrelatorTable::from_full(q.scenario, Eigen::VectorXd::Zero(4)), q);
  CHECK(zero.p_g == 0.5);
  CHECK(zero.p_h == 0.5);
  CHECK(zero.inside);
  Eigen::VectorXd e(4);
  e << 1, 0.2, 0.2, 1;
  const auto edge = uffink_point(CorrelatorTable::from_full(q.scenario, e), q);
  CHECK(edge.p_g == doctest::Approx(1.0));
  CHECK(edge.p_h == doctest::Approx(0.5));
}

TEST_CASE("circle identity on random correlator tables") {
  const auto q = uffink_toy();
  RandomStream rng(60);
  for (int i = 0; i < 100; ++i) {
    const auto t = random_table(q.scenario, rng);
    const auto v = evaluate_quadratic(q, t);
    const auto pt = uffink_point(t, q);
    const double n = q.support;
    const double radius2 = (pt.p_g - 0.5) * (pt.p_g - 0.5) + (pt.p_h - 0.5) * (pt.p_h - 0.5);
    CHECK(std::abs(v.lhs / (4 * n * n) - radius2) <= 1e-10);
    CHECK(pt.inside == !v.violated);
  }
}

TEST_CASE("the g-branch of the product protocol reproduces P_g") {
  const auto q = uffink_toy();
  RandomStream rng(61);
  const auto ccp = compile_uffink(q, 0.95, 0.9);
  for (int i = 0; i < 100; ++i) {
    const auto b = random_behavior(q.scenario, rng);
    const auto pt = uffink_point(b, q);
    CHECK(std::abs(product_protocol_success(ccp, b, 0) - pt.p_g) < 1e-10);
    CHECK(std::abs(product_protocol_success(ccp, b, 1) - pt.p_h) < 1e-10);
    const double w = ccp.selector->prob_g;
    CHECK(std::abs(product_protocol_success(ccp, b) - (w * pt.p_g + (1 - w) * pt.p_h)) < 1e-10);
  }
}
