#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qgames/game_compiler.hpp"
#include "qgames/simplex.hpp"
#include "qgames/solvers.hpp"
#include "support.hpp"

using namespace qgames;
using namespace qgames::testing;

namespace {

GameSpec chsh_game() { return compile_linear(normalize_linear(chsh_events())); }

GameSpec constant_game(double v) {
  auto g = chsh_game();
  g.acceptance.setConstant(v);
  return g;
}

/// Random 2-player game with a random question distribution.
GameSpec random_game(RandomStream& rng, int m, int d) {
  GameSpec g;
  g.questions = {m, m};
  g.answers = {d, d};
  g.question_dist = Eigen::VectorXd(m * m);
  for (int i = 0; i < m * m; ++i) g.question_dist(i) = rng.uniform() + 0.05;
  g.question_dist /= g.question_dist.sum();
  g.acceptance = Eigen::MatrixXd(m * m, d * d);
  for (Eigen::Index i = 0; i < g.acceptance.size(); ++i) g.acceptance.data()[i] = rng.uniform();
  return g;
}

/// All strategies of both players, no best response.
double naive_classical(const GameSpec& g) {
  const auto sc = g.scenario();
  double best = 0.0;
  for (std::uint64_t k = 0; k < deterministic_strategy_count(sc); ++k)
    best = std::max(best, win_probability(g, deterministic_behavior(sc, decode_strategy(sc, k).tables)));
  return best;
}

TwoQubitStated product_zero() {
  Matrix4c<double> rho = Matrix4c<double>::Zero();
  rho(0, 0) = 1.0;
  return TwoQubitStated::from_density(rho, "|00>");
}

}  // namespace

TEST_CASE("simplex on small programs") {
  Eigen::MatrixXd a(1, 1);
  a << 1;
  CHECK(solve_lp<double>(Eigen::VectorXd::Ones(1), a, Eigen::VectorXd::Ones(1)).value == doctest::Approx(1.0));

  Eigen::MatrixXd a2(1, 2);
  a2 << 1, 1;
  const auto s = solve_lp<double>(Eigen::VectorXd::Ones(2), a2, Eigen::VectorXd::Ones(1));
  CHECK(s.value == doctest::Approx(1.0));
  CHECK(s.primal_residual < 1e-12);

  // x1 - x2 = 1 with cost -x1 is unbounded; x1 + x2 = -1 is infeasible.
  Eigen::MatrixXd a3(1, 2);
  a3 << 1, -1;
  Eigen::VectorXd c3(2);
  c3 << -1, 0;
  CHECK_THROWS_AS(solve_lp<double>(c3, a3, Eigen::VectorXd::Ones(1)), UnboundedError);
  CHECK_THROWS_AS(solve_lp<double>(Eigen::VectorXd::Ones(2), a2, -Eigen::VectorXd::Ones(1)), InfeasibleError);
}

TEST_CASE("simplex certificates on random bounded programs") {
  RandomStream rng(71);
  for (int t = 0; t < 50; ++t) {
    const int m = 2 + static_cast<int>(rng.below(4));
    const int n = m + 2 + static_cast<int>(rng.below(6));
    Eigen::MatrixXd a(m, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform(0.1, 1.0);
    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0(i) = rng.uniform();
    const Eigen::VectorXd b = a * x0;
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = rng.uniform(-1.0, 1.0);
    const auto sol = solve_lp<double>(c, a, b);
    CHECK(sol.primal_residual < 1e-9);
    CHECK(sol.duality_gap < 1e-9);
    CHECK(sol.dual_infeasibility < 1e-9);
    CHECK(sol.x.minCoeff() >= -1e-12);
    CHECK(sol.value <= c.dot(x0) + 1e-9);
  }
}

TEST_CASE("classical values") {
  CHECK(classical_value(chsh_game()).value == 0.75);
  CHECK(classical_value(constant_game(1.0)).value == 1.0);
  CHECK(local_bound(chsh_correlators()) == 2.0);
  RandomStream rng(72);
  for (int i = 0; i < 20; ++i) {
    const auto g = random_game(rng, 2 + static_cast<int>(rng.below(2)), 2);
    CHECK(std::abs(classical_value(g).value - naive_classical(g)) < 1e-12);
  }
  SolverConfig tiny;
  tiny.enumeration_cap = 15;
  CHECK_THROWS_AS(classical_value(chsh_game(), tiny), SizeError);
}

TEST_CASE("classical value is independent of the thread count") {
  RandomStream rng(73);
  const auto g = random_game(rng, 3, 3);
  SolverConfig one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = classical_value(g, one);
  const auto b = classical_value(g, many);
  CHECK(a.value == b.value);
  CHECK(a.certificate == b.certificate);
}

TEST_CASE("zero-sum games") {
  Eigen::MatrixXd pennies(2, 2);
  pennies << 1, 0, 0, 1;
  const auto s = solve_zero_sum(pennies);
  CHECK(s.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.row_mix(0) == doctest::Approx(0.5));
  CHECK(s.col_mix(0) == doctest::Approx(0.5));
  CHECK(solve_zero_sum(Eigen::MatrixXd::Constant(3, 4, 0.3)).value == doctest::Approx(0.3).epsilon(1e-12));

  // 2x2 without a saddle point: v = (ad - bc) / (a + d - b - c).
  RandomStream rng(74);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.5, 1), d = rng.uniform(0.5, 1), b = rng.uniform(0, 0.4), c = rng.uniform(0, 0.4);
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;
    CHECK(std::abs(solve_zero_sum(m).value - (a * d - b * c) / (a + d - b - c)) < 1e-9);
  }
  for (int i = 0; i < 30; ++i) {
    Eigen::MatrixXd m(3 + rng.below(5), 2 + rng.below(6));
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = rng.uniform(-2, 2);
    const auto z = solve_zero_sum(m);
    CHECK(z.gap <= 1e-6);
    CHECK((z.row_mix.transpose() * m).minCoeff() >= z.value - 1e-6);
    CHECK((m * z.col_mix).maxCoeff() <= z.value + 1e-6);
  }
}

TEST_CASE("shared randomness") {
  const auto g = chsh_game();
  CHECK(shared_randomness_value(g, false).value == 0.75);
  // Adversarial CHSH: the referee picks the question pair.
  CHECK(shared_randomness_value(g, true).value == doctest::Approx(0.75).epsilon(1e-9));
  GameSpec one;
  one.questions = {1, 1};
  one.answers = {2, 2};
  one.question_dist = Eigen::VectorXd::Ones(1);
  one.acceptance = Eigen::MatrixXd(1, 4);
  one.acceptance << 0.2, 0.9, 0.4, 0.1;
  CHECK(shared_randomness_value(one, true).value == doctest::Approx(classical_value(one).value).epsilon(1e-9));
  CHECK(shared_randomness_value(one, false).value == classical_value(one).value);
  CHECK(worst_case_deterministic_value(g).value == 0.0);
}

TEST_CASE("seesaw on CHSH") {
  const auto g = chsh_game();
  const auto q = quantum_value_two_qubit(g, make_singlet<double>());
  CHECK(q.value >= (2.0 + std::numbers::sqrt2) / 4.0 - 1e-4);
  CHECK(q.value <= (2.0 + std::numbers::sqrt2) / 4.0 + 1e-12);
  for (double p : {0.0, 0.3, 0.7, 0.9}) {
    const auto w = quantum_value_two_qubit(g, make_werner(p));
    CHECK(std::abs(w.value - 0.5 * (1.0 + std::numbers::sqrt2 * p / 2.0)) < 1e-4);
  }
  CHECK(quantum_value_two_qubit(constant_game(0.5), make_werner(0.4)).value == doctest::Approx(0.5).epsilon(1e-12));

  OptimizerConfig a, b;
  a.seed = b.seed = 99;
  a.threads = 1;
  b.threads = 3;
  CHECK(quantum_value_two_qubit(g, make_singlet<double>(), a).certificate ==
        quantum_value_two_qubit(g, make_singlet<double>(), b).certificate);
}

TEST_CASE("resource monotonicity at fixed question distribution") {
  RandomStream rng(75);
  for (int i = 0; i < 15; ++i) {
    const auto g = random_game(rng, 2, 2);
    const double c = classical_value(g).value;
    const double s = shared_randomness_value(g, false).value;
    const double q = std::max(quantum_value_two_qubit(g, make_singlet<double>()).value,
                              quantum_value_two_qubit(g, product_zero()).value);
    CHECK(c == s);
    CHECK(q >= c - 1e-9);
    CHECK(q <= 1.0 + 1e-12);
  }
}

TEST_CASE("NHV adversarial LP") {
  const auto tv = [](int a, int b, int x, int y) { return a * b == ((x & y) ? -1 : 1); };
  const auto corr = [](double p) {
    Eigen::Matrix2d e;
    const double v = p / std::numbers::sqrt2;
    e << v, v, v, -v;
    return e;
  };
  const auto r1 = nhv_adversarial_value(corr(1.0), tv);
  CHECK(r1.value >= std::numbers::sqrt2 - 1.0 - 1e-8);
  CHECK(r1.value <= 1.0);
  const auto edge = nhv_adversarial_value(corr(1.0 / std::numbers::sqrt2), tv);
  CHECK(edge.value >= -1e-12);
  CHECK(edge.value <= 1e-9);
  CHECK(nhv_adversarial_value(corr(0.9), tv).value >= std::numbers::sqrt2 * 0.9 - 1.0 - 1e-8);
  for (double p : {0.0, 0.3, 1.0 / std::numbers::sqrt2, 0.8, 0.9, 1.0})
    CHECK(nhv_adversarial_value(corr(p), tv).value >= std::max(std::numbers::sqrt2 * p - 1.0, 0.0) - 1e-8);
  CHECK_THROWS_AS(nhv_adversarial_value(corr(1.5), tv), InfeasibleError);
  CHECK(r1.certificate.contains("support"));
}

TEST_CASE("Monte Carlo harness") {
  const auto g = chsh_game();
  DeterministicStrategy win;
  win.tables = {{0, 0}, {0, 0}};
  const auto always = monte_carlo_value(constant_game(1.0), win, 10000, 1);
  CHECK(always.value == 1.0);
  CHECK(always.std_error == 0.0);

  QuantumStrategy q;
  q.frame = chsh_optimal_frame<double>();
  const auto mc = monte_carlo_value(g, q, 1000000, 5);
  CHECK(std::abs(mc.value - (2.0 + std::numbers::sqrt2) / 4.0) <= 4.0 * mc.std_error);
  const auto again = monte_carlo_value(g, q, 1000000, 5);
  CHECK(again.value == mc.value);
  const auto threaded = monte_carlo_value(g, q, 1000000, 5, 3);
  CHECK(threaded.value == mc.value);
  CHECK_THROWS_AS(monte_carlo_value(g, q, 0, 5), DomainError);
}

TEST_CASE("Monte Carlo agrees with exact values over randomized trials") {
  RandomStream rng(76);
  int outside = 0;
  for (int t = 0; t < 50; ++t) {
    const auto g = random_game(rng, 2, 2);
    const auto b = random_behavior(g.scenario(), rng);
    const auto mc = monte_carlo_value(g, b, 20000, static_cast<std::uint64_t>(t));
    outside += std::abs(mc.value - win_probability(g, b)) > 4.0 * mc.std_error;
  }
  CHECK(outside == 0);
}
