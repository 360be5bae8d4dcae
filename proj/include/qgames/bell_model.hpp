#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qgames/errors.hpp"

namespace qgames {

/// Default cap on dense table entries (settings tuples x outcome tuples).
inline constexpr std::uint64_t kDefaultTableCap = 1'000'000;

/// Sentinel setting value marking a party that takes no part in a correlator.
inline constexpr int kAbsent = -1;

/// Number of parties with their per-party setting and outcome counts.
/// Setting and outcome tuples are flattened in mixed radix with party 0 most
/// significant.
class BellScenario {
 public:
  BellScenario() = default;
  BellScenario(std::vector<int> settings, std::vector<int> outcomes, std::uint64_t cap = kDefaultTableCap);

  /// Two parties, `m` settings and `d` outcomes each.
  static BellScenario bipartite(int m, int d) { return BellScenario({m, m}, {d, d}); }

  int parties() const { return static_cast<int>(settings_.size()); }
  const std::vector<int>& settings() const { return settings_; }
  const std::vector<int>& outcomes() const { return outcomes_; }
  int settings(int party) const { return settings_[party]; }
  int outcomes(int party) const { return outcomes_[party]; }

  std::size_t setting_tuples() const { return setting_tuples_; }
  std::size_t outcome_tuples() const { return outcome_tuples_; }

  bool binary() const;

  std::size_t encode_settings(const std::vector<int>& s) const;
  std::size_t encode_outcomes(const std::vector<int>& r) const;
  std::vector<int> decode_settings(std::size_t index) const;
  std::vector<int> decode_outcomes(std::size_t index) const;

  friend bool operator==(const BellScenario&, const BellScenario&) = default;

 private:
  std::vector<int> settings_;
  std::vector<int> outcomes_;
  std::size_t setting_tuples_ = 0;
  std::size_t outcome_tuples_ = 0;
};

/// Mixed-radix helpers shared by all dense tables.
std::size_t encode_tuple(const std::vector<int>& digits, const std::vector<int>& radix);
std::vector<int> decode_tuple(std::size_t index, const std::vector<int>& radix);

/// Conditional probability table P(r|s): rows are setting tuples, columns
/// outcome tuples.
class Behavior {
 public:
  Behavior(BellScenario scenario, Eigen::MatrixXd table);

  const BellScenario& scenario() const { return scenario_; }
  const Eigen::MatrixXd& table() const { return table_; }
  double probability(std::size_t s, std::size_t r) const { return table_(s, r); }

  /// Checks that every party's marginal is independent of the other
  /// parties' settings.
  bool is_no_signaling(double tol = 1e-10) const;

 private:
  BellScenario scenario_;
  Eigen::MatrixXd table_;
};

/// Affine map taking the original left-hand side to the normalized one:
/// normalized = scale * original + shift, scale > 0.
struct AffineRecord {
  double scale = 1.0;
  double shift = 0.0;

  double apply(double original) const { return scale * original + shift; }
  double invert(double normalized) const { return (normalized - shift) / scale; }
  AffineRecord then(const AffineRecord& next) const {
    return {next.scale * scale, next.scale * shift + next.shift};
  }
};

/// sum_{s,r} a_{s,r} P(r|s) <= B.
struct LinearInequality {
  BellScenario scenario;
  Eigen::MatrixXd coeffs;
  double bound = 0.0;
  bool normalized = false;
  AffineRecord affine;

  void validate() const;
};

struct CorrelatorTerm {
  double coeff = 0.0;
  std::vector<int> settings;  ///< kAbsent marks a party outside the correlator
};

/// sum g E(x_1..x_n) <= B over +-1 outcomes; terms may leave parties out.
/// After augmentation `dummy` holds the appended no-measurement setting of
/// each party (kAbsent when the party has none).
struct CorrelatorInequality {
  BellScenario scenario;
  std::vector<CorrelatorTerm> terms;
  double bound = 0.0;
  std::vector<int> dummy;

  void validate() const;
  bool has_absent_slots() const;
};

/// Correlators over extended setting tuples: each party has its settings
/// plus one trailing "absent" slot.
class CorrelatorTable {
 public:
  CorrelatorTable(BellScenario scenario, Eigen::VectorXd values);
  /// A table whose full-tuple correlators are `full` (indexed like setting
  /// tuples) and whose partial correlators are zero.
  static CorrelatorTable from_full(const BellScenario& scenario, const Eigen::VectorXd& full);

  const BellScenario& scenario() const { return scenario_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::vector<int> radix() const;

  double at(const std::vector<int>& settings) const;
  /// Correlators of full setting tuples only, indexed like setting tuples.
  Eigen::VectorXd full() const;

 private:
  BellScenario scenario_;
  Eigen::VectorXd values_;
};

/// (sum g E)^2 + (sum h E)^2 <= B with g, h in {-1, 0, 1}^tuples.
struct QuadraticInequality {
  BellScenario scenario;
  Eigen::VectorXd g;
  Eigen::VectorXd h;
  int support = 0;  ///< N = sum |g| = sum |h|
  double bound = 0.0;

  void validate() const;
};

/// One elementary event i = (s, r) whose probability P(i) = P(r|s).
struct EventIndex {
  std::vector<int> settings;
  std::vector<int> outcomes;
};

struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;  ///< k_i per event index

  int degree() const;
};

/// sum c_k prod_i P(i)^{k_i} <= B.
struct PolynomialInequality {
  BellScenario scenario;
  std::vector<EventIndex> events;
  std::vector<Monomial> monomials;
  double bound = 0.0;
  bool normalized = false;
  AffineRecord affine;

  void validate() const;
};

struct QuadraticValue {
  double lhs = 0.0;
  bool violated = false;
};

double evaluate_linear(const LinearInequality& ineq, const Behavior& b);
double evaluate_correlator(const CorrelatorInequality& ineq, const CorrelatorTable& e);
CorrelatorTable behavior_to_correlators(const Behavior& b);
QuadraticValue evaluate_quadratic(const QuadraticInequality& ineq, const CorrelatorTable& e);
double evaluate_polynomial(const PolynomialInequality& ineq, const Behavior& b);

/// Rewrites a full-tuple correlator inequality over probabilities,
/// E(s) = sum_r (prod_j (-1)^{r_j}) P(r|s).
LinearInequality expand_correlator(const CorrelatorInequality& ineq);

/// Deterministic local behavior: party j answers strategy[j][s_j].
Behavior deterministic_behavior(const BellScenario& scenario, const std::vector<std::vector<int>>& strategy);

/// Number of deterministic local strategies, prod_j d_j^{m_j}; saturates at UINT64_MAX.
std::uint64_t deterministic_strategy_count(const BellScenario& scenario);

/// Maximum of the left-hand side over deterministic local strategies.
double local_bound(const LinearInequality& ineq, std::uint64_t cap = 100'000'000);

/// Maximum over +-1 deterministic assignments; absent parties contribute a
/// factor 1 and dummy settings are pinned to +1.
double local_bound(const CorrelatorInequality& ineq, std::uint64_t cap = 100'000'000);

}  // namespace qgames
