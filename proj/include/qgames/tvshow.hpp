#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgames/game_compiler.hpp"
#include "qgames/quantum.hpp"
#include "qgames/solvers.hpp"

namespace qgames::tvshow {

/// f = x_a ^ x_b ^ (y_a & y_b) with one bit each way, f_m = x_a ^ (y_a & y_b)
/// with one bit from Alice to Bob, or a constant target.
enum class CcpFunction { f, f_m, constant };

CcpFunction parse_function(const std::string& id);
std::string to_string(CcpFunction fn);

struct CcpInstance {
  int x_a = 0;
  int y_a = 0;
  std::optional<int> x_b;
  int y_b = 0;
  CcpFunction function = CcpFunction::f_m;

  void validate() const;
  int target() const;
};

/// Adversary input index: (x_a, y_a, y_b) -> 4 x_a + 2 y_a + y_b.
inline constexpr int kInputs = 8;
CcpInstance decode_input(int index);

/// Deterministic one-way protocol. message[2 x_a + y_a] is Alice's bit;
/// answer[2 m + y_b] is Bob's output.
struct OneWayTables {
  std::array<int, 4> message{};
  std::array<int, 4> answer{};

  static OneWayTables from_index(int index);  ///< 16 x 16 enumeration order
  int index() const;
  int output(const CcpInstance& in) const;
};

/// The one-way 1-bit CCP for a target as a two-player game: Alice's
/// question is (x_a, y_a) and her answer the message; Bob's question is y_b
/// and his answer a table m -> output, so team strategies are exactly the
/// 16 x 16 message/answer tables.
GameSpec one_way_ccp_game(CcpFunction fn);

/// Exact classical success under uniform inputs.
ValueReport ccp_classical_value(CcpFunction fn, const SolverConfig& cfg = {});

/// (1 + sqrt(2) p / 2) / 2.
double quantum_success(double p);
ValueReport ccp_quantum_value(CcpFunction fn, double p);

/// Runs the entangled protocol on rho_p: measurements A_{y_a}, B_{y_b} of
/// the CHSH frame, Alice sends x_a ^ a, Bob outputs m ^ b (^ x_b for f; for
/// f Bob also sends x_b ^ b and both must be right).
ValueReport ccp_quantum_simulate(CcpFunction fn, double p, std::uint64_t n, std::uint64_t seed, unsigned threads = 0);

/// Correlators E(y_a, y_b) of rho_p in the CHSH frame.
Eigen::Matrix2d werner_correlators(double p);

/// Per-input success of the entangled protocol, (1 + s E) / 2 with s = -1 on
/// y_a = y_b = 1.
std::array<double, kInputs> quantum_success_per_input(double p);

enum class ResourceClass { D, R, Q, C, N };
std::string to_string(ResourceClass c);

struct TvStrategy {
  ResourceClass resource = ResourceClass::D;
  OneWayTables tables;                      ///< D, R
  std::array<bool, 4> coin_mask{};          ///< R: Bob flips a fair coin at (m, y_b)
  double p = 1.0;                           ///< Q, N
  MeasurementFramed frame = chsh_optimal_frame<double>();  ///< Q, N
  std::vector<std::pair<int, double>> shared_mixture;      ///< C: (tables index, weight)

  void validate() const;
};

/// Private-coin strategy: Alice sends g0 = x_a, Bob trusts it when y_b = 0
/// and flips a coin otherwise.
TvStrategy coin_on_bad_branch();

/// The adversarial value of a strategy of the given class.
ValueReport tv_value(const TvStrategy& strategy, const SolverConfig& cfg = {});

/// D: max over deterministic strategies of the min over inputs.
ValueReport deterministic_value(const SolverConfig& cfg = {});
/// C: zero-sum value with shared randomness.
ValueReport shared_value(const SolverConfig& cfg = {});
/// N: the hidden-variable LP on rho_p correlators.
ValueReport nhv_value(double p, const SolverConfig& cfg = {});
double nhv_bound(double p);  ///< max{sqrt(2) p - 1, 0}

/// Multi-start alternating maximization over private-randomness strategies
/// (Alice: message probabilities; Bob: answer probabilities). A lower bound
/// on the max-min; the problem is non-convex so optimality is not claimed.
ValueReport private_randomness_estimate(int restarts, std::uint64_t seed);

struct ResourceRow {
  double p = 0.0;
  ValueReport d, r, q, c, n_lp;
  double n_bound = 0.0;
};

ResourceRow tv_resource_table(double p, const SolverConfig& cfg = {});

struct CollapseReport {
  bool collapsed = false;          ///< every deterministic strategy loses on some input
  int strategies = 0;
  int cases = 0;                   ///< strategies x inputs checked
  double max_min = 1.0;
};

/// Exhausts all 16 x 16 deterministic strategies over all 8 inputs.
CollapseReport verify_deterministic_collapse();

/// Inputs on which a deterministic strategy answers wrongly.
std::vector<CcpInstance> failing_inputs(const OneWayTables& tables);

}  // namespace qgames::tvshow
