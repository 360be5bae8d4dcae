#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgames/bell_model.hpp"
#include "qgames/game_compiler.hpp"
#include "qgames/quantum.hpp"
#include "qgames/simplex.hpp"
#include "qgames/random.hpp"
#include "qgames/simplex.hpp"

namespace qgames {

enum class Method { enumeration, zero_sum, seesaw, lp, monte_carlo, analytic };

std::string to_string(Method m);

/// A game value with the method that produced it and a certificate that lets
/// the number be checked independently.
struct ValueReport {
  double value = 0.0;
  Method method = Method::enumeration;
  nlohmann::json certificate;
  double std_error = 0.0;       ///< zero for exact methods
  std::uint64_t iterations = 0; ///< strategies, pivots, sweeps or samples
};

struct SolverConfig {
  std::uint64_t enumeration_cap = 100'000'000;
  unsigned threads = 0;  ///< 0: all cores
  long lp_pivot_limit = kDefaultPivotLimit;
};

/// Per-player answer tables, setting -> outcome.
struct DeterministicStrategy {
  std::vector<std::vector<int>> tables;
};

/// The k-th deterministic strategy in mixed-radix order (party 0, setting 0 most significant).
DeterministicStrategy decode_strategy(const BellScenario& scenario, std::uint64_t index);

struct ClassicalOptimum {
  double value = 0.0;
  DeterministicStrategy strategy;
  std::uint64_t evaluated = 0;
};

/// Exact maximum over deterministic product strategies. Enumerates all but
/// the last player and lets the last one best-respond; ties resolve to the
/// lowest enumeration index and the lowest answer.
ClassicalOptimum best_deterministic_strategy(const GameSpec& game, const SolverConfig& cfg = {});
ValueReport classical_value(const GameSpec& game, const SolverConfig& cfg = {});

/// Rows: deterministic team strategies in decode_strategy order. Columns:
/// question tuples. Entry: V(strategy(s) | s).
Eigen::MatrixXd team_payoff_matrix(const GameSpec& game, const SolverConfig& cfg = {});

struct ZeroSumSolution {
  double value = 0.0;
  Eigen::VectorXd row_mix;  ///< maximizer
  Eigen::VectorXd col_mix;  ///< minimizer
  double lower = 0.0;       ///< min_j (p^T M)_j
  double upper = 0.0;       ///< max_i (M q)_i
  double gap = 0.0;
};

/// Value of the zero-sum matrix game where the row player maximizes.
ZeroSumSolution solve_zero_sum(const Eigen::MatrixXd& payoff, long pivot_limit = kDefaultPivotLimit);

/// With adversarial inputs the questions are chosen by an opponent who
/// knows the strategy distribution; otherwise pi is fixed and the value
/// coincides with classical_value.
ValueReport shared_randomness_value(const GameSpec& game, bool adversarial_inputs, const SolverConfig& cfg = {});

/// max over deterministic strategies of min over question tuples.
ValueReport worst_case_deterministic_value(const GameSpec& game, const SolverConfig& cfg = {});

struct QuantumStrategy {
  TwoQubitStated state = make_singlet<double>();
  MeasurementFramed frame;
  std::array<std::vector<bool>, 2> relabel;  ///< swap outcomes per party per setting
};

Behavior quantum_behavior(const BellScenario& scenario, const QuantumStrategy& strategy);

struct OptimizerConfig {
  int restarts = 20;
  double tolerance = 1e-9;
  int max_sweeps = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct SeesawResult {
  double value = 0.0;
  QuantumStrategy strategy;
  int best_restart = 0;
  std::uint64_t sweeps = 0;
};

/// Alternating best responses over Bloch vectors for a fixed state. Each
/// half-step is exact: with one party fixed the win probability is affine
/// in every vector of the other party, maximized by the normalized gradient.
SeesawResult seesaw(const GameSpec& game, const TwoQubitStated& state, const OptimizerConfig& opt = {});
ValueReport quantum_value_two_qubit(const GameSpec& game, const TwoQubitStated& state, const OptimizerConfig& opt = {});

/// Success predicate s(a, b, x, y) for +-1 outcomes a, b at settings x, y.
using NhvPredicate = std::function<bool(int a, int b, int x, int y)>;

struct NhvOptions {
  bool constrain_marginals = true;
  std::array<double, 2> alice_marginals{0.0, 0.0};  ///< <A_x>
  std::array<double, 2> bob_marginals{0.0, 0.0};    ///< <B_y>
  long pivot_limit = kDefaultPivotLimit;
};

/// Worst case over nonlocal hidden-variable models: a distribution q over
/// the 256 atoms (one outcome pair per setting pair) reproducing the given
/// correlators, with the adversary picking the setting pair after seeing the
/// atom. Throws InfeasibleError for non-physical correlators.
ValueReport nhv_adversarial_value(const Eigen::Matrix2d& correlators, const NhvPredicate& predicate,
                                  const NhvOptions& options = {});

/// Generic Monte Carlo harness. Samples are split into fixed batches with
/// seeds derived from `seed`, so the estimate does not depend on `threads`.
ValueReport monte_carlo_estimate(std::uint64_t n, std::uint64_t seed, unsigned threads,
                                 const std::function<bool(RandomStream&)>& trial);

ValueReport monte_carlo_value(const GameSpec& game, const Behavior& b, std::uint64_t n, std::uint64_t seed,
                              unsigned threads = 0);
ValueReport monte_carlo_value(const GameSpec& game, const DeterministicStrategy& s, std::uint64_t n,
                              std::uint64_t seed, unsigned threads = 0);
ValueReport monte_carlo_value(const GameSpec& game, const QuantumStrategy& s, std::uint64_t n, std::uint64_t seed,
                              unsigned threads = 0);
ValueReport monte_carlo_value(const MultiRoundGameSpec& game, const Behavior& b, std::uint64_t n,
                              std::uint64_t seed, unsigned threads = 0);
/// Runs the product protocol of a CCP against a behavior.
ValueReport monte_carlo_value(const CcpSpec& ccp, const Behavior& b, std::uint64_t n, std::uint64_t seed,
                              unsigned threads = 0);

}  // namespace qgames
