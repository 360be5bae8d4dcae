#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qgames/quantum.hpp"
#include "qgames/random.hpp"

using namespace qgames;

namespace {

// Tr(rho (A (x) B)) straight from the density matrix.
double trace_correlator(const TwoQubitStated& s, const BlochVectord& a, const BlochVectord& b) {
  return (s.density() * kron(observable(a), observable(b))).trace().real();
}

BlochVectord random_unit(RandomStream& rng) {
  return BlochVectord::normalized({rng.normal(), rng.normal(), rng.normal()});
}

const BlochVectord kZ(0, 0, 1);
const BlochVectord kX(1, 0, 0);

}  // namespace

TEST_CASE("singlet is a normalized pure state") {
  const auto s = make_singlet<double>();
  CHECK(std::abs(s.density().trace().real() - 1.0) < 1e-14);
  CHECK(std::abs(s.purity() - 1.0) < 1e-14);
}

TEST_CASE("singlet correlators match the dense trace") {
  const auto s = make_singlet<double>();
  CHECK(trace_correlator(s, kZ, kZ) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(trace_correlator(s, kZ, kX)) < 1e-14);
  CHECK(correlator(s, kZ, kZ) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(correlator(s, kZ, kX)) < 1e-14);

  RandomStream rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_unit(rng);
    CHECK(correlator(s, a, a) == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("Werner family endpoints") {
  const auto mixed = make_werner(0.0);
  CHECK((mixed.density() - Matrix4c<double>::Identity() / 4.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(mixed.correlation_matrix().cwiseAbs().maxCoeff() < 1e-15);
  CHECK((make_werner(1.0).density() - make_singlet<double>().density()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(trace_correlator(make_werner(0.5), kZ, kZ) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(correlator(make_werner(0.5), kZ, kZ) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("Werner correlator is -p a.b") {
  RandomStream rng(11);
  for (int i = 0; i < 500; ++i) {
    const double p = rng.uniform();
    const auto state = make_werner(p);
    const auto a = random_unit(rng);
    const auto b = random_unit(rng);
    const double expected = -p * a.vec().dot(b.vec());
    CHECK(std::abs(correlator(state, a, b) - expected) <= 1e-10);
    CHECK(std::abs(trace_correlator(state, a, b) - expected) <= 1e-10);
    CHECK(std::abs(alice_marginal(state, a)) <= 1e-12);
    CHECK(std::abs(bob_marginal(state, b)) <= 1e-12);
  }
}

TEST_CASE("CHSH value in the optimal frame") {
  const auto frame = chsh_optimal_frame<double>();
  CHECK(std::abs(chsh_value(make_werner(1.0), frame) - 2.0 * std::numbers::sqrt2) < 1e-10);
  CHECK(std::abs(chsh_value(make_werner(1.0 / std::numbers::sqrt2), frame) - 2.0) < 1e-10);
  CHECK(std::abs(chsh_value(make_werner(0.0), frame)) < 1e-15);
  for (double p : {0.1, 0.25, 0.6, 0.9})
    CHECK(std::abs(chsh_value(make_werner(p), frame) - 2.0 * std::numbers::sqrt2 * p) < 1e-10);
}

TEST_CASE("the unnegated frame gives the opposite sign on the singlet") {
  MeasurementFramed frame;
  frame.alice = {kZ, kX};
  frame.bob = {BlochVectord::normalized({1, 0, 1}), BlochVectord::normalized({-1, 0, 1})};
  CHECK(std::abs(chsh_value(make_singlet<double>(), frame) + 2.0 * std::numbers::sqrt2) < 1e-10);
}

TEST_CASE("CHSH never exceeds the Tsirelson value of the state") {
  RandomStream rng(2024);
  for (double p : {0.3, 0.8, 1.0}) {
    const auto state = make_werner(p);
    double best = -10.0;
    for (int i = 0; i < 10000; ++i) {
      MeasurementFramed f;
      f.alice = {random_unit(rng), random_unit(rng)};
      f.bob = {random_unit(rng), random_unit(rng)};
      best = std::max(best, chsh_value(state, f));
    }
    CHECK(best <= 2.0 * std::numbers::sqrt2 * p + 1e-9);
  }
}

TEST_CASE("chsh_value rejects frames without two settings per party") {
  MeasurementFramed f;
  f.alice = {kZ, kX, kZ};
  f.bob = {kZ, kX};
  CHECK_THROWS_AS(chsh_value(make_singlet<double>(), f), ShapeError);
}

TEST_CASE("sampling reproduces the joint law") {
  RandomStream rng(77);
  const auto singlet = make_singlet<double>();
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b] = sample_outcomes(singlet, kX, kX, rng);
    REQUIRE(a == -b);
  }

  SUBCASE("maximally mixed state is uncorrelated") {
    const int n = 100000;
    double sum = 0.0;
    const auto mixed = make_werner(0.0);
    for (int i = 0; i < n; ++i) {
      const auto [a, b] = sample_outcomes(mixed, kZ, kX, rng);
      sum += a * b;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
  }

  SUBCASE("singlet at angle pi/4") {
    const int n = 100000;
    const auto b = BlochVectord::in_xz_plane(std::numbers::pi / 4.0);
    int equal = 0;
    for (int i = 0; i < n; ++i) {
      const auto [x, y] = sample_outcomes(singlet, kZ, b, rng);
      equal += x == y;
    }
    const double target = (1.0 - std::cos(std::numbers::pi / 4.0)) / 2.0;
    const double sigma = std::sqrt(target * (1.0 - target) / n);
    CHECK(std::abs(static_cast<double>(equal) / n - target) <= 4.0 * sigma);
  }

  SUBCASE("random states and directions") {
    for (int trial = 0; trial < 10; ++trial) {
      const auto state = make_werner(rng.uniform());
      const auto a = random_unit(rng);
      const auto b = random_unit(rng);
      const auto law = joint_distribution(state, a, b);
      CHECK(std::abs(law[0] + law[1] + law[2] + law[3] - 1.0) < 1e-12);
      const int n = 40000;
      std::array<int, 4> counts{};
      for (int i = 0; i < n; ++i) {
        const auto [x, y] = sample_outcomes(state, a, b, rng);
        ++counts[static_cast<std::size_t>(2 * (x == 1 ? 0 : 1) + (y == 1 ? 0 : 1))];
      }
      for (std::size_t k = 0; k < 4; ++k) {
        const double sigma = std::sqrt(law[k] * (1.0 - law[k]) / n);
        CHECK(std::abs(static_cast<double>(counts[k]) / n - law[k]) <= 4.0 * sigma + 1e-12);
      }
    }
  }
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(make_werner(1.5), DomainError);
  CHECK_THROWS_AS(make_werner(-0.1), DomainError);
  CHECK_THROWS_AS(BlochVectord(1, 1, 0), DomainError);
  Matrix4c<double> rho = Matrix4c<double>::Zero();
  rho(0, 0) = 1.5;
  rho(1, 1) = -0.5;
  CHECK_THROWS_AS(TwoQubitStated::from_density(rho), DomainError);
  rho = Matrix4c<double>::Identity() / 4.0;
  rho(0, 1) = 0.1;
  CHECK_THROWS_AS(TwoQubitStated::from_density(rho), DomainError);
}

TEST_CASE("x-z plane convention measures from +z") {
  const auto v = BlochVectord::in_xz_plane(std::numbers::pi / 2.0);
  CHECK(std::abs(v.x() - 1.0) < 1e-15);
  CHECK(std::abs(v.z()) < 1e-15);
  CHECK(BlochVectord::in_xz_plane(0.0).z() == 1.0);
}
