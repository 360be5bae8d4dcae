#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "qgames/bell_model.hpp"
#include "qgames/random.hpp"

namespace qgames::testing {

/// Random conditional distribution table: each row is an independent point
/// of the simplex (exponential spacings).
inline Behavior random_behavior(const BellScenario& sc, RandomStream& rng) {
  Eigen::MatrixXd t(static_cast<Eigen::Index>(sc.setting_tuples()), static_cast<Eigen::Index>(sc.outcome_tuples()));
  for (Eigen::Index s = 0; s < t.rows(); ++s) {
    for (Eigen::Index r = 0; r < t.cols(); ++r) t(s, r) = -std::log(1.0 - rng.uniform());
    t.row(s) /= t.row(s).sum();
  }
  return Behavior(sc, t);
}

/// Product of independent local response functions, so no-signaling.
inline Behavior random_local_behavior(const BellScenario& sc, RandomStream& rng) {
  std::vector<std::vector<std::vector<double>>> local(static_cast<std::size_t>(sc.parties()));
  for (int j = 0; j < sc.parties(); ++j)
    for (int x = 0; x < sc.settings(j); ++x) {
      std::vector<double> p(static_cast<std::size_t>(sc.outcomes(j)));
      double total = 0.0;
      for (auto& v : p) total += (v = rng.uniform() + 1e-3);
      for (auto& v : p) v /= total;
      local[static_cast<std::size_t>(j)].push_back(p);
    }
  Eigen::MatrixXd t(static_cast<Eigen::Index>(sc.setting_tuples()), static_cast<Eigen::Index>(sc.outcome_tuples()));
  for (Eigen::Index s = 0; s < t.rows(); ++s) {
    const auto xs = sc.decode_settings(static_cast<std::size_t>(s));
    for (Eigen::Index r = 0; r < t.cols(); ++r) {
      const auto rs = sc.decode_outcomes(static_cast<std::size_t>(r));
      double v = 1.0;
      for (int j = 0; j < sc.parties(); ++j)
        v *= local[static_cast<std::size_t>(j)][static_cast<std::size_t>(xs[static_cast<std::size_t>(j)])]
                  [static_cast<std::size_t>(rs[static_cast<std::size_t>(j)])];
      t(s, r) = v;
    }
  }
  return Behavior(sc, t);
}

/// sum over winning events of 1/4 P(ab|xy) with a xor b = x and y.
inline LinearInequality chsh_events() {
  const auto sc = BellScenario::bipartite(2, 2);
  LinearInequality ineq;
  ineq.scenario = sc;
  ineq.coeffs = Eigen::MatrixXd::Zero(4, 4);
  ineq.bound = 0.75;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y))
            ineq.coeffs(static_cast<Eigen::Index>(sc.encode_settings({x, y})),
                        static_cast<Eigen::Index>(sc.encode_outcomes({a, b}))) = 0.25;
  return ineq;
}

/// E00 + E01 + E10 - E11 <= 2.
inline CorrelatorInequality chsh_correlators() {
  CorrelatorInequality ineq;
  ineq.scenario = BellScenario::bipartite(2, 2);
  ineq.terms = {{1.0, {0, 0}}, {1.0, {0, 1}}, {1.0, {1, 0}}, {-1.0, {1, 1}}};
  ineq.bound = 2.0;
  return ineq;
}

/// Coefficients uniform in [-1, 1] on a random small scenario.
inline LinearInequality random_linear(RandomStream& rng) {
  const int parties = 2 + static_cast<int>(rng.below(2));
  std::vector<int> m, d;
  for (int j = 0; j < parties; ++j) {
    m.push_back(2 + static_cast<int>(rng.below(2)));
    d.push_back(2 + static_cast<int>(rng.below(parties == 2 ? 2 : 1)));
  }
  LinearInequality ineq;
  ineq.scenario = BellScenario(m, d);
  ineq.coeffs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ineq.scenario.setting_tuples()),
                                      static_cast<Eigen::Index>(ineq.scenario.outcome_tuples()));
  for (Eigen::Index i = 0; i < ineq.coeffs.size(); ++i) ineq.coeffs.data()[i] = rng.uniform(-1.0, 1.0);
  ineq.bound = 0.0;
  return ineq;
}

}  // namespace qgames::testing
