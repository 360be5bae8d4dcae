#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qgames/circle_game.hpp"

using namespace qgames;
using namespace qgames::circle;

namespace {

constexpr double kPi = std::numbers::pi;

/// Up to `max_arcs` disjoint arcs with random endpoints.
ArcPartitionStrategy random_partition(RandomStream& rng, int max_arcs) {
  const int arcs = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_arcs)));
  std::vector<double> cuts;
  for (int i = 0; i < 2 * arcs; ++i) cuts.push_back(rng.uniform(0.0, kTwoPi));
  std::sort(cuts.begin(), cuts.end());
  const double rotate = rng.uniform(0.0, kTwoPi);
  std::vector<Arc> out;
  for (int i = 0; i < arcs; ++i) out.push_back({cuts[2 * i] + rotate, cuts[2 * i + 1] - cuts[2 * i]});
  return ArcPartitionStrategy(out);
}

/// Direct Monte Carlo of an arc strategy, independent of the library's simulator.
double brute_partition(const CircleGameParams& params, const ArcPartitionStrategy& s, int n, RandomStream& rng) {
  int wins = 0;
  for (int i = 0; i < n; ++i) {
    const auto in = sample_inputs(params, rng);
    wins += (s.contains(in.x_alice) == s.contains(in.x_bob)) == in.near_alice;
  }
  return static_cast<double>(wins) / n;
}

}  // namespace

TEST_CASE("angle helpers") {
  CHECK(wrap_angle(0.0) == kTwoPi);
  CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_angle(kTwoPi + 1.0) == doctest::Approx(1.0));
  CHECK(circular_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  CHECK(circular_distance(1.0, 1.0 + kPi) == doctest::Approx(kPi));
  CHECK_THROWS_AS(CircleGameParams(0.0), DomainError);
  CHECK_THROWS_AS(CircleGameParams(kPi / 2.0 + 1e-9), DomainError);
  CHECK_NOTHROW(CircleGameParams(kPi / 2.0));
}

TEST_CASE("arc partitions") {
  const auto half = ArcPartitionStrategy::half_circle();
  CHECK(half.contains(0.0));
  CHECK(half.contains(kPi - 1e-9));
  CHECK_FALSE(half.contains(kPi));
  CHECK(half.measure() == doctest::Approx(kPi));
  const ArcPartitionStrategy wrap({{kTwoPi - 0.5, 1.0}});
  CHECK(wrap.contains(0.2));
  CHECK(wrap.contains(kTwoPi - 0.2));
  CHECK_FALSE(wrap.contains(1.0));
  CHECK(wrap.measure() == doctest::Approx(1.0));
  CHECK_THROWS_AS(ArcPartitionStrategy({{0.0, 2.0}, {1.0, 2.0}}), DomainError);
}

TEST_CASE("input sampling") {
  const CircleGameParams params(1.07);
  RandomStream rng(100);
  const int n = 100000;
  int near = 0;
  std::vector<int> bins(36, 0);
  for (int i = 0; i < n; ++i) {
    const auto s = sample_inputs(params, rng);
    near += s.near_alice;
    REQUIRE(s.x_alice > 0.0);
    REQUIRE(s.x_alice <= kTwoPi);
    const double d = s.near_alice ? circular_distance(s.x_alice, s.x_bob) : circular_distance(s.x_alice + kPi, s.x_bob);
    REQUIRE(d <= params.eta() + 1e-12);
    ++bins[static_cast<std::size_t>(std::min(35.0, std::floor((s.x_alice / kTwoPi) * 36.0)))];
  }
  CHECK(std::abs(near - n / 2.0) <= 4.0 * std::sqrt(n * 0.25));
  double chi2 = 0.0;
  const double expected = n / 36.0;
  for (int c : bins) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 66.62);  // 35 dof, p = 0.001
}

TEST_CASE("closed forms") {
  CHECK(classical_success(kPi / 2.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(classical_success(1.07) == doctest::Approx(1.0 - 1.07 / (2.0 * kPi)).epsilon(1e-15));
  CHECK(std::abs(classical_success(1.07) - 0.82971) < 1e-5);
  CHECK(classical_success(1e-9) == doctest::Approx(1.0));
  CHECK(quantum_success(1e-9) == doctest::Approx(1.0));
  CHECK(std::abs(quantum_success(1.07) - 0.909907) < 1e-6);
  CHECK(quantum_success(kPi / 2.0) == doctest::Approx(0.5 + 1.0 / kPi).epsilon(1e-15));
  CHECK(delta_p(kPi / 2.0) == doctest::Approx(0.5 * (2.0 / kPi + 0.5 - 1.0)).epsilon(1e-14));
  CHECK(std::abs(delta_p(1e-9)) < 1e-9);
  for (int i = 1; i <= 10000; ++i) {
    const double eta = kPi / 2.0 * i / 10000.0;
    REQUIRE(std::abs(delta_p(eta) - (quantum_success(eta) - classical_success(eta))) <= 1e-14);
  }
}

TEST_CASE("optimal quantum advantage") {
  const auto opt = optimize_delta_p(1e-10);
  CHECK(opt.eta >= 1.05);
  CHECK(opt.eta <= 1.09);
  CHECK(std::abs(opt.delta - 0.0802) <= 5e-4);
  // Stationarity: d/deta [sin/eta + eta/pi] = 0.
  const double e = opt.eta;
  CHECK(std::abs((e * std::cos(e) - std::sin(e)) / (e * e) + 1.0 / kPi) < 1e-8);
}

TEST_CASE("simulated protocols match their formulas") {
  for (double eta : {0.3, 0.7, 1.07, kPi / 2.0}) {
    const CircleGameParams params(eta);
    const auto c = simulate_classical(params, ArcPartitionStrategy::half_circle(), 1000000, 21);
    CHECK(std::abs(c.value - classical_success(eta)) <= 4.0 * c.std_error);
    const auto q = simulate_quantum(params, 1000000, 22);
    CHECK(std::abs(q.value - quantum_success(eta)) <= 4.0 * q.std_error);
  }
  const auto whole = simulate_classical(CircleGameParams(1.07), ArcPartitionStrategy::whole_circle(), 200000, 3);
  CHECK(std::abs(whole.value - 0.5) <= 4.0 * whole.std_error);
}

TEST_CASE("simulation is reproducible and thread independent") {
  const CircleGameParams params(1.07);
  const auto a = simulate_quantum(params, 300000, 5, 1);
  const auto b = simulate_quantum(params, 300000, 5, 4);
  CHECK(a.value == b.value);
  CHECK(simulate_quantum(params, 300000, 6, 1).value != a.value);
}

TEST_CASE("quantum protocol is symmetric and rotation invariant") {
  const CircleGameParams params(1.07);
  const auto br = simulate_quantum_breakdown(params, 1000000, 8);
  const double pn = static_cast<double>(br.near_wins) / static_cast<double>(br.near_trials);
  const double pf = static_cast<double>(br.far_wins) / static_cast<double>(br.far_trials);
  const double se = std::sqrt(pn * (1 - pn) / static_cast<double>(br.near_trials) + pf * (1 - pf) / static_cast<double>(br.far_trials));
  CHECK(std::abs(pn - pf) <= 4.0 * se);
  const double target = quantum_success(1.07);
  for (std::size_t d = 0; d < 10; ++d) {
    const double n = static_cast<double>(br.decile_trials[d]);
    const double p = static_cast<double>(br.decile_wins[d]) / n;
    CHECK(std::abs(p - target) <= 4.0 * std::sqrt(target * (1 - target) / n));
  }
}

TEST_CASE("exact partition success") {
  const CircleGameParams params(1.07);
  CHECK(partition_success(params, ArcPartitionStrategy::half_circle()) ==
        doctest::Approx(classical_success(1.07)).epsilon(1e-12));
  CHECK(partition_success(params, ArcPartitionStrategy::whole_circle()) == doctest::Approx(0.5).epsilon(1e-12));
  RandomStream rng(9);
  for (int i = 0; i < 10; ++i) {
    const auto s = random_partition(rng, 4);
    const double mc = brute_partition(params, s, 200000, rng);
    const double exact = partition_success(params, s);
    CHECK(std::abs(mc - exact) <= 4.0 * std::sqrt(exact * (1 - exact) / 200000.0) + 1e-9);
  }
}

TEST_CASE("random arc partitions respect the classical bound") {
  RandomStream rng(10);
  for (double eta : {0.5, 1.07, kPi / 2.0}) {
    const CircleGameParams params(eta);
    for (int i = 0; i < 200; ++i) {
      const auto s = random_partition(rng, 6);
      CHECK(partition_success(params, s) <= classical_success(eta) + 1e-12);
    }
  }
}

TEST_CASE("midpoint quadrature of the local-model integral") {
  const CircleGameParams params(1.07);
  const auto half = evaluate_newbell(params, ArcPartitionStrategy::half_circle(), 1000);
  CHECK(std::abs(half.lhs - classical_success(1.07)) <= std::max(half.error_bound, 1e-6));
  CHECK(half.satisfied);
  CHECK(half.local_model);

  const auto always = evaluate_newbell(params, ArcPartitionStrategy::whole_circle(), 1000);
  CHECK(always.lhs == doctest::Approx(0.5).epsilon(1e-12));

  const auto q = evaluate_newbell(params, singlet_kernel(), 1000, false);
  CHECK(std::abs(q.lhs - quantum_success(1.07)) < 1e-5);
  CHECK_FALSE(q.satisfied);
  CHECK_FALSE(q.local_model);
  CHECK_THROWS_AS(evaluate_newbell(params, singlet_kernel(), 10, false), DomainError);

  RandomStream rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto s = random_partition(rng, 6);
    const auto r = evaluate_newbell(params, s, 1000);
    CHECK(r.satisfied);
    CHECK(std::abs(r.lhs - partition_success(params, s)) <= 4.0 * kTwoPi / 2000.0);
  }
}

TEST_CASE("two-arc grid search finds the half circle") {
  const CircleGameParams params(1.07);
  const auto best = search_two_arc_partitions(params, 200);
  CHECK(best.evaluated == 200 * 201 / 2);
  CHECK(best.best_success <= classical_success(1.07) + 1e-12);
  CHECK(best.best_success >= classical_success(1.07) - 1e-12);
  CHECK(best.best_length == doctest::Approx(kPi));
}
