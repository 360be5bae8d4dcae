#include "qgames/circle_game.hpp"

#include <algorithm>
#include <cmath>

#include "qgames/parallel.hpp"
#include "qgames/quantum.hpp"

namespace qgames::circle {

namespace {

constexpr double kPi = std::numbers::pi;

/// theta mod 2pi in [0, 2pi).
double reduce(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Integral over d in [lo, hi] of |[l1, h1) n [l2 + d, h2 + d)|. The overlap
/// is piecewise linear in d, so the trapezoid rule over its kinks is exact.
double integrated_overlap(double l1, double h1, double l2, double h2, double lo, double hi) {
  const auto overlap = [&](double d) { return std::max(0.0, std::min(h1, h2 + d) - std::max(l1, l2 + d)); };
  double pts[6] = {lo, hi, l1 - h2, l1 - l2, h1 - h2, h1 - l2};
  std::sort(pts, pts + 6);
  double total = 0.0;
  double prev = lo;
  double fprev = overlap(lo);
  for (double p : pts) {
    if (p <= prev || p > hi) continue;
    const double f = overlap(p);
    total += 0.5 * (f + fprev) * (p - prev);
    prev = p;
    fprev = f;
  }
  return total;
}

/// Integral over d in [lo, hi] of |S n (S + d)| on the circle.
double integrated_autocorrelation(const std::vector<std::pair<double, double>>& iv, double lo, double hi) {
  double total = 0.0;
  for (const auto& [l1, h1] : iv)
    for (const auto& [l2, h2] : iv)
      for (int w = -2; w <= 2; ++w) total += integrated_overlap(l1, h1, l2 + w * kTwoPi, h2 + w * kTwoPi, lo, hi);
  return total;
}

}  // namespace

double wrap_angle(double theta) {
  const double r = reduce(theta);
  return r == 0.0 ? kTwoPi : r;
}

double circular_distance(double a, double b) {
  const double d = reduce(a - b);
  return std::min(d, kTwoPi - d);
}

CircleGameParams::CircleGameParams(double eta) : eta_(eta) {
  if (!(eta > 0.0 && eta <= kPi / 2.0)) throw DomainError("eta must lie in (0, pi/2]");
}

ArcPartitionStrategy::ArcPartitionStrategy(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
  std::vector<std::pair<double, double>> raw;
  for (const auto& a : arcs_) {
    if (!(a.length >= 0.0 && a.length <= kTwoPi)) throw DomainError("arc length must lie in [0, 2pi]");
    if (a.length == 0.0) continue;
    if (a.length == kTwoPi) {
      raw.emplace_back(0.0, kTwoPi);
      continue;
    }
    const double s = reduce(a.start);
    const double e = s + a.length;
    if (e <= kTwoPi) {
      raw.emplace_back(s, e);
    } else {
      raw.emplace_back(s, kTwoPi);
      raw.emplace_back(0.0, e - kTwoPi);
    }
  }
  std::sort(raw.begin(), raw.end());
  for (const auto& iv : raw) {
    if (!intervals_.empty() && iv.first < intervals_.back().second - 1e-12)
      throw DomainError("arcs overlap after normalization");
    if (!intervals_.empty() && iv.first <= intervals_.back().second)
      intervals_.back().second = std::max(intervals_.back().second, iv.second);
    else
      intervals_.push_back(iv);
  }
}

ArcPartitionStrategy ArcPartitionStrategy::half_circle() { return ArcPartitionStrategy({{0.0, kPi}}); }
ArcPartitionStrategy ArcPartitionStrategy::whole_circle() { return ArcPartitionStrategy({{0.0, kTwoPi}}); }

bool ArcPartitionStrategy::contains(double theta) const {
  const double t = reduce(theta);
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](double v, const std::pair<double, double>& iv) { return v < iv.first; });
  if (it == intervals_.begin()) return false;
  --it;
  return t < it->second;
}

double ArcPartitionStrategy::measure() const {
  double m = 0.0;
  for (const auto& [lo, hi] : intervals_) m += hi - lo;
  return m;
}

CircleSample sample_inputs(const CircleGameParams& params, RandomStream& rng) {
  CircleSample s;
  s.x_alice = kTwoPi - rng.uniform(0.0, kTwoPi);  // (0, 2pi]
  s.near_alice = rng.bernoulli(0.5);
  const double offset = rng.uniform(-params.eta(), params.eta());
  s.x_bob = wrap_angle(s.x_alice + offset + (s.near_alice ? 0.0 : kPi));
  return s;
}

double classical_success(double eta) { return 1.0 - eta / kTwoPi; }

double quantum_success(double eta) { return 0.5 + std::sin(eta) / (2.0 * eta); }

double delta_p(double eta) { return 0.5 * (std::sin(eta) / eta + eta / kPi - 1.0); }

DeltaOptimum optimize_delta_p(double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-9;
  double hi = kPi / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = delta_p(x1);
  double f2 = delta_p(x2);
  while (hi - lo > tolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = delta_p(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = delta_p(x1);
    }
  }
  const double eta = 0.5 * (lo + hi);
  return {eta, delta_p(eta)};
}

ValueReport simulate_classical(const CircleGameParams& params, const ArcPartitionStrategy& strategy, std::uint64_t n,
                               std::uint64_t seed, unsigned threads) {
  auto rep = monte_carlo_estimate(n, seed, threads, [&](RandomStream& rng) {
    const auto s = sample_inputs(params, rng);
    const bool says_near = strategy.contains(s.x_alice) == strategy.contains(s.x_bob);
    return says_near == s.near_alice;
  });
  rep.certificate["eta"] = params.eta();
  rep.certificate["protocol"] = "arc partition";
  return rep;
}

namespace {

const TwoQubitStated& singlet() {
  static const TwoQubitStated state = make_singlet<double>();
  return state;
}

bool play_quantum(const CircleSample& s, RandomStream& rng) {
  const auto a = BlochVectord::in_xz_plane(s.x_alice);
  const auto b = BlochVectord::in_xz_plane(s.x_bob);
  const auto [alpha, beta] = sample_outcomes(singlet(), a, b, rng);
  const bool says_near = alpha != beta;
  return says_near == s.near_alice;
}

}  // namespace

ValueReport simulate_quantum(const CircleGameParams& params, std::uint64_t n, std::uint64_t seed, unsigned threads) {
  auto rep = monte_carlo_estimate(n, seed, threads, [&](RandomStream& rng) {
    const auto s = sample_inputs(params, rng);
    return play_quantum(s, rng);
  });
  rep.certificate["eta"] = params.eta();
  rep.certificate["protocol"] = "singlet, anticorrelated means closer";
  return rep;
}

QuantumBreakdown simulate_quantum_breakdown(const CircleGameParams& params, std::uint64_t n, std::uint64_t seed) {
  QuantumBreakdown out;
  out.decile_trials.assign(10, 0);
  out.decile_wins.assign(10, 0);
  RandomStream rng(seed);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto s = sample_inputs(params, rng);
    const bool win = play_quantum(s, rng);
    (s.near_alice ? out.near_trials : out.far_trials)++;
    if (win) (s.near_alice ? out.near_wins : out.far_wins)++;
    const auto decile = std::min<std::size_t>(9, static_cast<std::size_t>(s.x_alice / kTwoPi * 10.0));
    out.decile_trials[decile]++;
    if (win) out.decile_wins[decile]++;
  }
  return out;
}

double partition_success(const CircleGameParams& params, const ArcPartitionStrategy& strategy) {
  const double eta = params.eta();
  const double size = strategy.measure();
  const auto& iv = strategy.intervals();
  // P(chi(x) != chi(x + d)) = (2|S| - 2 C(d)) / 2pi for uniform x.
  const double near_mismatch = (2.0 * size * 2.0 * eta - 2.0 * integrated_autocorrelation(iv, -eta, eta)) / (kTwoPi * 2.0 * eta);
  const double far_mismatch =
      (2.0 * size * 2.0 * eta - 2.0 * integrated_autocorrelation(iv, kPi - eta, kPi + eta)) / (kTwoPi * 2.0 * eta);
  return 0.5 * (1.0 - near_mismatch) + 0.5 * far_mismatch;
}

SuccessKernel local_kernel(const ArcPartitionStrategy& strategy) {
  return [strategy](double xa, double xb, bool near) {
    const bool says_near = strategy.contains(xa) == strategy.contains(xb);
    return says_near == near ? 1.0 : 0.0;
  };
}

SuccessKernel singlet_kernel() {
  return [](double xa, double xb, bool near) {
    const double anti = 0.5 * (1.0 + std::cos(xa - xb));
    return near ? anti : 1.0 - anti;
  };
}

namespace {

/// rho = 1/(8 pi eta) on two bands of area 4 pi eta each; in coordinates
/// (x_A, u) with x_B = x_A + u (+ pi) a midpoint cell has weight 1/(2 R^2).
double newbell_midpoint(const CircleGameParams& params, const SuccessKernel& kernel, int resolution) {
  const double eta = params.eta();
  const double hx = kTwoPi / resolution;
  const double hu = 2.0 * eta / resolution;
  double sum = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double xa = (i + 0.5) * hx;
    double row = 0.0;
    for (int k = 0; k < resolution; ++k) {
      const double u = -eta + (k + 0.5) * hu;
      row += kernel(xa, wrap_angle(xa + u), true);
      row += kernel(xa, wrap_angle(xa + kPi + u), false);
    }
    sum += row;
  }
  return sum / (2.0 * resolution * static_cast<double>(resolution));
}

}  // namespace

NewbellResult evaluate_newbell(const CircleGameParams& params, const SuccessKernel& kernel, int resolution,
                               bool local_model) {
  if (resolution < 1000) throw DomainError("quadrature needs at least 1000 cells per dimension");
  const double coarse = newbell_midpoint(params, kernel, resolution);
  const double fine = newbell_midpoint(params, kernel, 2 * resolution);
  NewbellResult out;
  out.lhs = fine;
  out.error_bound = std::abs(coarse - fine);
  out.bound = classical_success(params.eta());
  out.satisfied = out.lhs <= out.bound + out.error_bound;
  out.local_model = local_model;
  return out;
}

NewbellResult evaluate_newbell(const CircleGameParams& params, const ArcPartitionStrategy& strategy, int resolution) {
  return evaluate_newbell(params, local_kernel(strategy), resolution, true);
}

PartitionSearch search_two_arc_partitions(const CircleGameParams& params, int resolution, unsigned threads) {
  if (resolution < 2) throw DomainError("partition grid needs at least two points");
  const double h = kTwoPi / resolution;
  std::vector<PartitionSearch> rows(static_cast<std::size_t>(resolution));
  parallel_chunks(static_cast<std::uint64_t>(resolution), static_cast<std::uint64_t>(resolution), threads,
                  [&](std::uint64_t i, std::uint64_t, std::uint64_t) {
                    PartitionSearch best;
                    best.best_success = -1.0;
                    for (int j = static_cast<int>(i) + 1; j <= resolution; ++j) {
                      const Arc arc{kTwoPi * static_cast<double>(i) / resolution, kTwoPi * (j - static_cast<double>(i)) / resolution};
                      const double v = partition_success(params, ArcPartitionStrategy({arc}));
                      ++best.evaluated;
                      if (v > best.best_success) {
                        best.best_success = v;
                        best.best_start = arc.start;
                        best.best_length = arc.length;
                      }
                    }
                    rows[i] = best;
                  });
  PartitionSearch out;
  out.best_success = -1.0;
  for (const auto& r : rows) {
    out.evaluated += r.evaluated;
    if (r.evaluated > 0 && r.best_success > out.best_success) {
      out.best_success = r.best_success;
      out.best_start = r.best_start;
      out.best_length = r.best_length;
    }
  }
  return out;
}

}  // namespace qgames::circle
