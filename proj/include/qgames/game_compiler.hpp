#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qgames/bell_model.hpp"
#include "qgames/random.hpp"

namespace qgames {

struct Provenance {
  std::string source;
  AffineRecord affine;  ///< maps the source inequality's LHS to the game value
};

/// A cooperative game: the referee draws a question tuple s with probability
/// pi(s), the players answer o without communicating, and the referee
/// accepts with probability V(o|s).
struct GameSpec {
  std::vector<int> questions;     ///< question alphabet size per player
  std::vector<int> answers;       ///< answer alphabet size per player
  Eigen::VectorXd question_dist;  ///< pi over question tuples
  Eigen::MatrixXd acceptance;     ///< V, question tuples x answer tuples
  Provenance provenance;

  int players() const { return static_cast<int>(questions.size()); }
  BellScenario scenario(std::uint64_t cap = kDefaultTableCap) const { return BellScenario(questions, answers, cap); }
  void validate() const;
};

/// sum_s pi(s) sum_o V(o|s) P(o|s).
double win_probability(const GameSpec& game, const Behavior& b);

/// One play: draw s ~ pi, o ~ P(.|s), accept with probability V(o|s).
bool play_round(const GameSpec& game, const Behavior& b, RandomStream& rng);

/// Shifts rows with negative coefficients by complementary events and
/// rescales so that all coefficients are nonnegative and the row maxima sum
/// to 1. The affine record maps the original LHS to the normalized one, and
/// the bound is carried along so violation status is unchanged.
LinearInequality normalize_linear(const LinearInequality& ineq);

bool is_normalized(const LinearInequality& ineq, double tol = 1e-12);

/// Source draws s with probability max_r a(s,r); the referee accepts answer
/// o with probability a(s,o) / max_r a(s,r). The win probability on every
/// behavior equals the normalized LHS.
GameSpec compile_linear(const LinearInequality& normalized);

/// Replaces absent-party slots by an appended no-measurement setting whose
/// outcome is always +1. Appends one dummy setting to every party when any
/// slot is absent; returns the input unchanged otherwise.
CorrelatorInequality augment_sliwa(const CorrelatorInequality& ineq);

/// Lifts a behavior onto the augmented scenario: the last setting of every
/// party is the dummy and deterministically yields outcome 0 (+1).
Behavior extend_with_dummy(const Behavior& b, const BellScenario& augmented);

/// Requires nonnegative coefficients; rescales them to sum to 1.
PolynomialInequality normalize_polynomial(const PolynomialInequality& ineq);

/// K independent rounds of single-event games, K drawn per monomial.
struct MultiRoundGameSpec {
  std::vector<GameSpec> trials;              ///< one game per event index i, won iff r is produced at s
  std::vector<double> monomial_probs;        ///< c
  std::vector<std::vector<int>> round_plans; ///< per monomial: trial i listed k_i times
  Eigen::VectorXd round_count_dist;          ///< P_K for K = 0..max degree
  Provenance provenance;
};

MultiRoundGameSpec compile_polynomial(const PolynomialInequality& normalized);

/// Exact success probability under independent rounds.
double expected_success(const MultiRoundGameSpec& game, const Behavior& b);

bool play(const MultiRoundGameSpec& game, const Behavior& b, RandomStream& rng);

struct Channel {
  int from = 0;
  int to = 0;
  int bits = 0;
};

struct UffinkSelector {
  double p_g = 0.5;
  double p_h = 0.5;
  double prob_g = 0.5;  ///< P(z selects f_g) = p_g / (p_g + p_h)
};

/// Distributed function evaluation. For the Uffink construction party j
/// receives input (z, x_j, y_j) encoded as (z * m_j + x_j) * 2 + y_j, with
/// y_j = 0 meaning +1; the target is the +-1 value of f_g or f_h.
struct CcpSpec {
  std::vector<int> input_sizes;
  Eigen::VectorXd input_dist;
  std::vector<Channel> channels;
  Eigen::VectorXi target;
  std::optional<UffinkSelector> selector;
  std::vector<int> base_settings;  ///< m_j of the underlying Bell scenario
  std::string description;

  void validate() const;
};

struct UffinkPoint {
  double p_g = 0.5;
  double p_h = 0.5;
  bool inside = true;
};

/// P_g = 1/2 + (sum g E) / 2N, P_h likewise; inside the circle of radius
/// sqrt(B)/2N around (1/2, 1/2).
UffinkPoint uffink_point(const CorrelatorTable& e, const QuadraticInequality& ineq);
UffinkPoint uffink_point(const Behavior& b, const QuadraticInequality& ineq);

/// Throws PreconditionError when the point lies inside the circle.
CcpSpec compile_uffink(const QuadraticInequality& ineq, double p1, double p2);

/// Success of the product protocol (party j announces y_j r_j, where r_j is
/// its outcome at setting x_j) against a behavior, restricted to branch z
/// (0 = f_g, 1 = f_h) or averaged over z when `branch` is empty.
double product_protocol_success(const CcpSpec& ccp, const Behavior& b, std::optional<int> branch = std::nullopt);

}  // namespace qgames
