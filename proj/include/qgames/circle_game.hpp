#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "qgames/random.hpp"
#include "qgames/solvers.hpp"

namespace qgames::circle {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into (0, 2pi].
double wrap_angle(double theta);

/// min(|d|, 2pi - |d|) after wrapping.
double circular_distance(double a, double b);

/// Bob's point lies within `eta` of Alice's point or of its antipode.
class CircleGameParams {
 public:
  explicit CircleGameParams(double eta);
  double eta() const { return eta_; }

 private:
  double eta_;
};

/// Half-open arc [start, start + length) on the circle.
struct Arc {
  double start = 0.0;
  double length = 0.0;
};

/// Alice's bit is membership of x_A in the union of arcs; Bob answers
/// "closer to Alice" iff his own point gives the same bit.
class ArcPartitionStrategy {
 public:
  explicit ArcPartitionStrategy(std::vector<Arc> arcs);

  /// [0, pi) against [pi, 2pi).
  static ArcPartitionStrategy half_circle();
  /// Every point in the set: Bob always answers "closer".
  static ArcPartitionStrategy whole_circle();

  bool contains(double theta) const;
  const std::vector<Arc>& arcs() const { return arcs_; }
  double measure() const;
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

 private:
  std::vector<Arc> arcs_;
  std::vector<std::pair<double, double>> intervals_;  ///< [lo, hi) within [0, 2pi), sorted, disjoint
};

struct CircleSample {
  double x_alice = 0.0;
  double x_bob = 0.0;
  bool near_alice = true;
};

CircleSample sample_inputs(const CircleGameParams& params, RandomStream& rng);

/// 1 - eta / 2pi.
double classical_success(double eta);
/// 1/2 + sin(eta) / (2 eta).
double quantum_success(double eta);
/// quantum_success - classical_success in closed form.
double delta_p(double eta);

struct DeltaOptimum {
  double eta = 0.0;
  double delta = 0.0;
};

/// Golden-section search for the maximizer of delta_p on (0, pi/2].
DeltaOptimum optimize_delta_p(double tolerance);

ValueReport simulate_classical(const CircleGameParams& params, const ArcPartitionStrategy& strategy, std::uint64_t n,
                               std::uint64_t seed, unsigned threads = 0);

/// Both parties measure the singlet along the x-z direction at their own
/// angle; Bob answers "closer" iff the outcomes are anticorrelated.
ValueReport simulate_quantum(const CircleGameParams& params, std::uint64_t n, std::uint64_t seed, unsigned threads = 0);

struct QuantumBreakdown {
  std::uint64_t near_trials = 0, near_wins = 0;
  std::uint64_t far_trials = 0, far_wins = 0;
  std::vector<std::uint64_t> decile_trials, decile_wins;  ///< by x_A decile
};

/// Same protocol as simulate_quantum with success counts per branch and per
/// tenth of the circle for Alice's point.
QuantumBreakdown simulate_quantum_breakdown(const CircleGameParams& params, std::uint64_t n, std::uint64_t seed);

/// Exact success of an arc partition, from the autocorrelation of the arc
/// set integrated over Bob's offset.
double partition_success(const CircleGameParams& params, const ArcPartitionStrategy& strategy);

/// P(f = g | x_A, x_B, near_alice) for a candidate model.
using SuccessKernel = std::function<double(double x_alice, double x_bob, bool near_alice)>;

SuccessKernel local_kernel(const ArcPartitionStrategy& strategy);
/// Singlet correlations plugged into the same functional; not a local model.
SuccessKernel singlet_kernel();

struct NewbellResult {
  double lhs = 0.0;
  double error_bound = 0.0;
  double bound = 0.0;      ///< 1 - eta / 2pi
  bool satisfied = true;   ///< lhs <= bound + error_bound
  bool local_model = true; ///< false when the kernel is not a local strategy
};

/// Midpoint quadrature of the integral of rho(x_A, x_B) P(f = g) over the
/// support of rho, at `resolution` and 2 * `resolution` cells per dimension.
/// Reports the finer estimate with error bound |I_R - I_2R| (the C/R term
/// of a first-order Richardson fit).
NewbellResult evaluate_newbell(const CircleGameParams& params, const SuccessKernel& kernel, int resolution,
                               bool local_model = true);
NewbellResult evaluate_newbell(const CircleGameParams& params, const ArcPartitionStrategy& strategy, int resolution);

struct PartitionSearch {
  double best_success = 0.0;
  double best_start = 0.0;
  double best_length = 0.0;
  std::uint64_t evaluated = 0;
};

/// Grid search over partitions of the circle into two arcs [a, b) and its
/// complement, with a and b on a `resolution`-point grid.
PartitionSearch search_two_arc_partitions(const CircleGameParams& params, int resolution, unsigned threads = 0);

}  // namespace qgames::circle
