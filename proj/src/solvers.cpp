#include "qgames/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgames/parallel.hpp"

namespace qgames {

std::string to_string(Method m) {
  switch (m) {
    case Method::enumeration: return "enumeration";
    case Method::zero_sum: return "zero-sum";
    case Method::seesaw: return "seesaw";
    case Method::lp: return "lp";
    case Method::monte_carlo: return "monte-carlo";
    case Method::analytic: return "analytic";
  }
  return "unknown";
}

namespace {

std::vector<int> strategy_radix(const BellScenario& sc, int parties) {
  std::vector<int> radix;
  for (int j = 0; j < parties; ++j)
    for (int x = 0; x < sc.settings(j); ++x) radix.push_back(sc.outcomes(j));
  return radix;
}

void fill_tables(const std::vector<int>& digits, const BellScenario& sc, int parties, DeterministicStrategy& out) {
  out.tables.resize(static_cast<std::size_t>(sc.parties()));
  std::size_t pos = 0;
  for (int j = 0; j < parties; ++j) {
    out.tables[j].resize(static_cast<std::size_t>(sc.settings(j)));
    for (int x = 0; x < sc.settings(j); ++x) out.tables[j][x] = digits[pos++];
  }
}

nlohmann::json to_json(const DeterministicStrategy& s) { return {{"tables", s.tables}}; }

void require_cap(const BellScenario& sc, const SolverConfig& cfg) {
  const auto count = deterministic_strategy_count(sc);
  if (count > cfg.enumeration_cap) throw SizeError("deterministic strategy enumeration", count, cfg.enumeration_cap);
}

}  // namespace

DeterministicStrategy decode_strategy(const BellScenario& sc, std::uint64_t index) {
  DeterministicStrategy s;
  fill_tables(decode_tuple(static_cast<std::size_t>(index), strategy_radix(sc, sc.parties())), sc, sc.parties(), s);
  return s;
}

ClassicalOptimum best_deterministic_strategy(const GameSpec& game, const SolverConfig& cfg) {
  game.validate();
  const auto sc = game.scenario();
  require_cap(sc, cfg);
  const int n = sc.parties();
  const int last = n - 1;
  const auto outer_radix = strategy_radix(sc, last);
  std::uint64_t outer_count = 1;
  for (int r : outer_radix) outer_count *= static_cast<std::uint64_t>(r);

  const auto questions = sc.setting_tuples();
  std::vector<std::vector<int>> decoded(questions);
  for (std::size_t s = 0; s < questions; ++s) decoded[s] = sc.decode_settings(s);
  const int m_last = sc.settings(last);
  const int d_last = sc.outcomes(last);

  struct Best {
    double value = -1.0;
    std::uint64_t index = 0;
    std::vector<int> last_answers;
  };
  constexpr std::uint64_t kChunks = 256;
  std::vector<Best> per_chunk(kChunks);

  parallel_chunks(outer_count, kChunks, cfg.threads, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
    DeterministicStrategy strat;
    Eigen::MatrixXd score(m_last, d_last);
    std::vector<int> r(static_cast<std::size_t>(n));
    Best best;
    for (std::uint64_t k = begin; k < end; ++k) {
      fill_tables(decode_tuple(static_cast<std::size_t>(k), outer_radix), sc, last, strat);
      score.setZero();
      for (std::size_t s = 0; s < questions; ++s) {
        const double w = game.question_dist(static_cast<Eigen::Index>(s));
        if (w == 0.0) continue;
        const auto& st = decoded[s];
        for (int j = 0; j < last; ++j) r[j] = strat.tables[j][st[j]];
        for (int b = 0; b < d_last; ++b) {
          r[last] = b;
          score(st[last], b) += w * game.acceptance(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(sc.encode_outcomes(r)));
        }
      }
      double value = 0.0;
      std::vector<int> answers(static_cast<std::size_t>(m_last));
      for (int y = 0; y < m_last; ++y) {
        Eigen::Index arg;
        value += score.row(y).maxCoeff(&arg);
        answers[y] = static_cast<int>(arg);
      }
      if (value > best.value) best = {value, k, std::move(answers)};
    }
    per_chunk[chunk] = std::move(best);
  });

  Best best;
  for (auto& b : per_chunk)
    if (b.value > best.value) best = std::move(b);
  ClassicalOptimum out;
  out.value = best.value;
  fill_tables(decode_tuple(static_cast<std::size_t>(best.index), outer_radix), sc, last, out.strategy);
  out.strategy.tables[last] = best.last_answers;
  out.evaluated = outer_count;
  return out;
}

ValueReport classical_value(const GameSpec& game, const SolverConfig& cfg) {
  const auto opt = best_deterministic_strategy(game, cfg);
  ValueReport rep;
  rep.value = opt.value;
  rep.method = Method::enumeration;
  rep.certificate = to_json(opt.strategy);
  rep.iterations = opt.evaluated;
  return rep;
}

Eigen::MatrixXd team_payoff_matrix(const GameSpec& game, const SolverConfig& cfg) {
  game.validate();
  const auto sc = game.scenario();
  require_cap(sc, cfg);
  const auto rows = deterministic_strategy_count(sc);
  const auto cols = sc.setting_tuples();
  if (static_cast<long double>(rows) * cols > 5e7L) throw SizeError("team payoff matrix entries", rows * cols, 50'000'000);
  const auto radix = strategy_radix(sc, sc.parties());
  Eigen::MatrixXd payoff(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::vector<std::vector<int>> decoded(cols);
  for (std::size_t s = 0; s < cols; ++s) decoded[s] = sc.decode_settings(s);
  DeterministicStrategy strat;
  std::vector<int> r(static_cast<std::size_t>(sc.parties()));
  for (std::uint64_t k = 0; k < rows; ++k) {
    fill_tables(decode_tuple(static_cast<std::size_t>(k), radix), sc, sc.parties(), strat);
    for (std::size_t s = 0; s < cols; ++s) {
      for (int j = 0; j < sc.parties(); ++j) r[j] = strat.tables[j][decoded[s][j]];
      payoff(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s)) =
          game.acceptance(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(sc.encode_outcomes(r)));
    }
  }
  return payoff;
}

ZeroSumSolution solve_zero_sum(const Eigen::MatrixXd& payoff, long pivot_limit) {
  if (payoff.size() == 0) throw ShapeError("zero-sum solver needs a nonempty payoff matrix");
  const Eigen::Index r = payoff.rows();
  const Eigen::Index c = payoff.cols();
  const double shift = 1.0 - payoff.minCoeff();
  const Eigen::MatrixXd shifted = payoff.array() + shift;

  // Row player: min 1.u  s.t.  M'^T u - s = 1, u, s >= 0; value 1 / 1.u.
  Eigen::MatrixXd a_row(c, r + c);
  a_row << shifted.transpose(), -Eigen::MatrixXd::Identity(c, c);
  Eigen::VectorXd c_row = Eigen::VectorXd::Zero(r + c);
  c_row.head(r).setOnes();
  const auto row_lp = solve_lp<double>(c_row, a_row, Eigen::VectorXd::Ones(c), pivot_limit);

  // Column player: max 1.w  s.t.  M' w + t = 1, w, t >= 0.
  Eigen::MatrixXd a_col(r, c + r);
  a_col << shifted, Eigen::MatrixXd::Identity(r, r);
  Eigen::VectorXd c_col = Eigen::VectorXd::Zero(c + r);
  c_col.head(c).setConstant(-1.0);
  const auto col_lp = solve_lp<double>(c_col, a_col, Eigen::VectorXd::Ones(r), pivot_limit);

  ZeroSumSolution sol;
  const Eigen::VectorXd u = row_lp.x.head(r);
  const Eigen::VectorXd w = col_lp.x.head(c);
  sol.row_mix = u / u.sum();
  sol.col_mix = w / w.sum();
  sol.lower = (sol.row_mix.transpose() * payoff).minCoeff();
  sol.upper = (payoff * sol.col_mix).maxCoeff();
  sol.gap = sol.upper - sol.lower;
  sol.value = 0.5 * (sol.lower + sol.upper);
  if (sol.gap > 1e-6) throw NumericError("zero-sum solution failed saddle-point verification");
  return sol;
}

ValueReport shared_randomness_value(const GameSpec& game, bool adversarial_inputs, const SolverConfig& cfg) {
  if (!adversarial_inputs) {
    // Against a fixed pi a mixture of deterministic strategies is never
    // better than its best component.
    auto rep = classical_value(game, cfg);
    rep.certificate["mixture"] = "point mass on the optimal deterministic strategy";
    return rep;
  }
  const Eigen::MatrixXd payoff = team_payoff_matrix(game, cfg);
  const auto sol = solve_zero_sum(payoff, cfg.lp_pivot_limit);
  ValueReport rep;
  rep.value = sol.value;
  rep.method = Method::zero_sum;
  nlohmann::json team = nlohmann::json::array();
  for (Eigen::Index i = 0; i < sol.row_mix.size(); ++i)
    if (sol.row_mix(i) > 1e-12) team.push_back({{"strategy", i}, {"weight", sol.row_mix(i)}});
  rep.certificate = {{"team_mixture", team},
                     {"adversary_mixture", std::vector<double>(sol.col_mix.data(), sol.col_mix.data() + sol.col_mix.size())},
                     {"lower", sol.lower},
                     {"upper", sol.upper}};
  rep.iterations = static_cast<std::uint64_t>(payoff.rows());
  return rep;
}

ValueReport worst_case_deterministic_value(const GameSpec& game, const SolverConfig& cfg) {
  const Eigen::MatrixXd payoff = team_payoff_matrix(game, cfg);
  Eigen::Index best_row = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < payoff.rows(); ++i) {
    const double worst = payoff.row(i).minCoeff();
    if (worst > best) {
      best = worst;
      best_row = i;
    }
  }
  ValueReport rep;
  rep.value = best;
  rep.method = Method::enumeration;
  rep.certificate = to_json(decode_strategy(game.scenario(), static_cast<std::uint64_t>(best_row)));
  rep.iterations = static_cast<std::uint64_t>(payoff.rows());
  return rep;
}

Behavior quantum_behavior(const BellScenario& sc, const QuantumStrategy& q) {
  if (sc.parties() != 2 || !sc.binary()) throw DomainError("quantum strategies need two players with binary answers");
  if (static_cast<int>(q.frame.alice.size()) != sc.settings(0) || static_cast<int>(q.frame.bob.size()) != sc.settings(1))
    throw ShapeError("measurement frame does not match the question alphabets");
  Eigen::MatrixXd table(static_cast<Eigen::Index>(sc.setting_tuples()), 4);
  for (int x = 0; x < sc.settings(0); ++x)
    for (int y = 0; y < sc.settings(1); ++y) {
      const auto p = joint_distribution(q.state, q.frame.alice[x], q.frame.bob[y]);
      const bool fa = !q.relabel[0].empty() && q.relabel[0][x];
      const bool fb = !q.relabel[1].empty() && q.relabel[1][y];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) table(x * sc.settings(1) + y, ((i ^ fa) * 2) + (j ^ fb)) = p[2 * i + j];
    }
  return Behavior(sc, std::move(table));
}

namespace {

using Vec3 = Eigen::Vector3d;

BlochVectord random_direction(RandomStream& rng) {
  for (;;) {
    const Vec3 v(rng.normal(), rng.normal(), rng.normal());
    if (v.norm() > 1e-6) return BlochVectord::normalized(v);
  }
}

/// Pauli-basis coefficients of the win probability: for each (x, y),
/// win = c0 + cA (a.rA) + cB (b.rB) + cAB (a^T T b).
struct SeesawModel {
  Eigen::MatrixXd c0, ca, cb, cab;
  Vec3 ra, rb;
  Eigen::Matrix3d t;
  int ma = 0, mb = 0;

  SeesawModel(const GameSpec& game, const TwoQubitStated& state) {
    const auto sc = game.scenario();
    if (sc.parties() != 2 || !sc.binary()) throw DomainError("two-qubit optimization needs two players with binary answers");
    ma = sc.settings(0);
    mb = sc.settings(1);
    c0 = ca = cb = cab = Eigen::MatrixXd::Zero(ma, mb);
    for (int x = 0; x < ma; ++x)
      for (int y = 0; y < mb; ++y) {
        const double w = game.question_dist(x * mb + y);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const double v = w * game.acceptance(x * mb + y, 2 * i + j) / 4.0;
            const double alpha = i == 0 ? 1.0 : -1.0;
            const double beta = j == 0 ? 1.0 : -1.0;
            c0(x, y) += v;
            ca(x, y) += v * alpha;
            cb(x, y) += v * beta;
            cab(x, y) += v * alpha * beta;
          }
      }
    ra = state.alice_bloch();
    rb = state.bob_bloch();
    t = state.correlation_matrix();
  }

  double value(const std::vector<Vec3>& a, const std::vector<Vec3>& b) const {
    double v = 0.0;
    for (int x = 0; x < ma; ++x)
      for (int y = 0; y < mb; ++y)
        v += c0(x, y) + ca(x, y) * a[x].dot(ra) + cb(x, y) * b[y].dot(rb) + cab(x, y) * a[x].dot(t * b[y]);
    return v;
  }

  void improve_alice(std::vector<Vec3>& a, const std::vector<Vec3>& b) const {
    for (int x = 0; x < ma; ++x) {
      Vec3 g = Vec3::Zero();
      for (int y = 0; y < mb; ++y) g += ca(x, y) * ra + cab(x, y) * (t * b[y]);
      if (g.norm() > 1e-14) a[x] = g.normalized();
    }
  }

  void improve_bob(const std::vector<Vec3>& a, std::vector<Vec3>& b) const {
    for (int y = 0; y < mb; ++y) {
      Vec3 g = Vec3::Zero();
      for (int x = 0; x < ma; ++x) g += cb(x, y) * rb + cab(x, y) * (t.transpose() * a[x]);
      if (g.norm() > 1e-14) b[y] = g.normalized();
    }
  }
};

}  // namespace

SeesawResult seesaw(const GameSpec& game, const TwoQubitStated& state, const OptimizerConfig& opt) {
  game.validate();
  if (opt.restarts < 1) throw DomainError("seesaw needs at least one restart");
  const SeesawModel model(game, state);

  struct Run {
    double value = -1.0;
    std::vector<Vec3> a, b;
    std::uint64_t sweeps = 0;
  };
  std::vector<Run> runs(static_cast<std::size_t>(opt.restarts));
  parallel_chunks(static_cast<std::uint64_t>(opt.restarts), static_cast<std::uint64_t>(opt.restarts), opt.threads,
                  [&](std::uint64_t k, std::uint64_t, std::uint64_t) {
                    RandomStream rng(derive_seed(opt.seed, k));
                    Run run;
                    for (int x = 0; x < model.ma; ++x) run.a.push_back(random_direction(rng).vec());
                    for (int y = 0; y < model.mb; ++y) run.b.push_back(random_direction(rng).vec());
                    double current = model.value(run.a, run.b);
                    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
                      model.improve_alice(run.a, run.b);
                      model.improve_bob(run.a, run.b);
                      const double next = model.value(run.a, run.b);
                      ++run.sweeps;
                      const bool done = next - current < opt.tolerance;
                      current = std::max(current, next);
                      if (done) break;
                    }
                    run.value = current;
                    runs[k] = std::move(run);
                  });

  SeesawResult out;
  out.value = -1.0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    out.sweeps += runs[k].sweeps;
    if (runs[k].value > out.value) {
      out.value = runs[k].value;
      out.best_restart = static_cast<int>(k);
    }
  }
  const auto& best = runs[static_cast<std::size_t>(out.best_restart)];
  out.strategy.state = state;
  for (const auto& v : best.a) out.strategy.frame.alice.push_back(BlochVectord::normalized(v));
  for (const auto& v : best.b) out.strategy.frame.bob.push_back(BlochVectord::normalized(v));
  // Report the value of the frame actually returned.
  out.value = win_probability(game, quantum_behavior(game.scenario(), out.strategy));
  return out;
}

ValueReport quantum_value_two_qubit(const GameSpec& game, const TwoQubitStated& state, const OptimizerConfig& opt) {
  const auto res = seesaw(game, state, opt);
  const auto dirs = [](const std::vector<BlochVectord>& vs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : vs) out.push_back({v.x(), v.y(), v.z()});
    return out;
  };
  ValueReport rep;
  rep.value = res.value;
  rep.method = Method::seesaw;
  rep.certificate = {{"state", state.label()},
                     {"alice", dirs(res.strategy.frame.alice)},
                     {"bob", dirs(res.strategy.frame.bob)},
                     {"restart", res.best_restart},
                     {"restarts", opt.restarts}};
  rep.iterations = res.sweeps;
  return rep;
}

ValueReport nhv_adversarial_value(const Eigen::Matrix2d& correlators, const NhvPredicate& predicate,
                                  const NhvOptions& options) {
  if (correlators.cwiseAbs().maxCoeff() > 1.0 + 1e-12) throw InfeasibleError("correlators outside [-1, 1] are not physical");
  constexpr int kAtoms = 256;
  const int rows = options.constrain_marginals ? 13 : 5;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, kAtoms);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd cost(kAtoms);
  b(0) = 1.0;
  for (int k = 0; k < 4; ++k) {
    const int x = k / 2, y = k % 2;
    b(1 + k) = correlators(x, y);
    if (options.constrain_marginals) {
      b(5 + k) = options.alice_marginals[static_cast<std::size_t>(x)];
      b(9 + k) = options.bob_marginals[static_cast<std::size_t>(y)];
    }
  }
  for (int atom = 0; atom < kAtoms; ++atom) {
    a(0, atom) = 1.0;
    double worst = 1.0;
    for (int k = 0; k < 4; ++k) {
      const int pair = (atom >> (2 * (3 - k))) & 3;
      const int oa = (pair >> 1) == 0 ? 1 : -1;
      const int ob = (pair & 1) == 0 ? 1 : -1;
      const int x = k / 2, y = k % 2;
      a(1 + k, atom) = oa * ob;
      if (options.constrain_marginals) {
        a(5 + k, atom) = oa;
        a(9 + k, atom) = ob;
      }
      worst = std::min(worst, predicate(oa, ob, x, y) ? 1.0 : 0.0);
    }
    cost(atom) = worst;
  }
  const auto sol = solve_lp<double>(cost, a, b, options.pivot_limit);
  if (sol.primal_residual > 1e-9) throw NumericError("NHV LP solution is not primal feasible");

  ValueReport rep;
  rep.value = sol.value;
  rep.method = Method::lp;
  nlohmann::json support = nlohmann::json::array();
  for (int atom = 0; atom < kAtoms; ++atom)
    if (sol.x(atom) > 1e-12) support.push_back({{"atom", atom}, {"weight", sol.x(atom)}});
  rep.certificate = {{"support", support},
                     {"duality_gap", sol.duality_gap},
                     {"primal_residual", sol.primal_residual},
                     {"dual_infeasibility", sol.dual_infeasibility}};
  rep.iterations = static_cast<std::uint64_t>(sol.pivots);
  return rep;
}

ValueReport monte_carlo_estimate(std::uint64_t n, std::uint64_t seed, unsigned threads,
                                 const std::function<bool(RandomStream&)>& trial) {
  if (n < 1) throw DomainError("Monte Carlo needs at least one sample");
  constexpr std::uint64_t kBatch = 1 << 16;
  const std::uint64_t batches = (n + kBatch - 1) / kBatch;
  std::vector<std::uint64_t> wins(batches, 0);
  parallel_chunks(batches, batches, threads, [&](std::uint64_t batch, std::uint64_t, std::uint64_t) {
    RandomStream rng(derive_seed(seed, batch));
    const std::uint64_t count = std::min(kBatch, n - batch * kBatch);
    std::uint64_t w = 0;
    for (std::uint64_t i = 0; i < count; ++i) w += trial(rng) ? 1 : 0;
    wins[batch] = w;
  });
  std::uint64_t total = 0;
  for (auto w : wins) total += w;
  ValueReport rep;
  rep.value = static_cast<double>(total) / static_cast<double>(n);
  rep.method = Method::monte_carlo;
  rep.std_error = std::sqrt(rep.value * (1.0 - rep.value) / static_cast<double>(n));
  rep.iterations = n;
  rep.certificate = {{"seed", seed}, {"wins", total}, {"batch_size", kBatch}};
  return rep;
}

ValueReport monte_carlo_value(const GameSpec& game, const Behavior& b, std::uint64_t n, std::uint64_t seed,
                              unsigned threads) {
  game.validate();
  if (!(b.scenario() == game.scenario())) throw ShapeError("behavior does not match the game alphabets");
  return monte_carlo_estimate(n, seed, threads, [&](RandomStream& rng) { return play_round(game, b, rng); });
}

ValueReport monte_carlo_value(const GameSpec& game, const DeterministicStrategy& s, std::uint64_t n,
                              std::uint64_t seed, unsigned threads) {
  auto rep = monte_carlo_value(game, deterministic_behavior(game.scenario(), s.tables), n, seed, threads);
  rep.certificate["strategy"] = to_json(s);
  return rep;
}

ValueReport monte_carlo_value(const GameSpec& game, const QuantumStrategy& q, std::uint64_t n, std::uint64_t seed,
                              unsigned threads) {
  game.validate();
  const auto sc = game.scenario();
  quantum_behavior(sc, q);  // shape check
  const int mb = sc.settings(1);
  std::vector<double> cdf(static_cast<std::size_t>(game.question_dist.size()));
  double acc = 0.0;
  for (std::size_t s = 0; s < cdf.size(); ++s) cdf[s] = acc += game.question_dist(static_cast<Eigen::Index>(s));
  return monte_carlo_estimate(n, seed, threads, [&](RandomStream& rng) {
    const double u = rng.uniform() * acc;
    const auto s = static_cast<int>(std::min<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(), cdf.size() - 1));
    const int x = s / mb, y = s % mb;
    auto [alpha, beta] = sample_outcomes(q.state, q.frame.alice[x], q.frame.bob[y], rng);
    int i = alpha == 1 ? 0 : 1;
    int j = beta == 1 ? 0 : 1;
    if (!q.relabel[0].empty() && q.relabel[0][x]) i ^= 1;
    if (!q.relabel[1].empty() && q.relabel[1][y]) j ^= 1;
    return rng.uniform() < game.acceptance(s, 2 * i + j);
  });
}

ValueReport monte_carlo_value(const MultiRoundGameSpec& game, const Behavior& b, std::uint64_t n,
                              std::uint64_t seed, unsigned threads) {
  return monte_carlo_estimate(n, seed, threads, [&](RandomStream& rng) { return play(game, b, rng); });
}

ValueReport monte_carlo_value(const CcpSpec& ccp, const Behavior& b, std::uint64_t n, std::uint64_t seed,
                              unsigned threads) {
  ccp.validate();
  const auto& sc = b.scenario();
  if (sc.settings() != ccp.base_settings || !sc.binary()) throw ShapeError("behavior does not match the CCP's Bell scenario");
  std::vector<double> cdf(static_cast<std::size_t>(ccp.input_dist.size()));
  double acc = 0.0;
  for (std::size_t k = 0; k < cdf.size(); ++k) cdf[k] = acc += ccp.input_dist(static_cast<Eigen::Index>(k));
  const int parties = sc.parties();
  return monte_carlo_estimate(n, seed, threads, [&](RandomStream& rng) {
    const double u = rng.uniform() * acc;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()), cdf.size() - 1);
    const auto input = decode_tuple(k, ccp.input_sizes);
    std::vector<int> x(static_cast<std::size_t>(parties));
    int ysign = 1;
    for (int j = 0; j < parties; ++j) {
      x[j] = (input[j] / 2) % sc.settings(j);
      if (input[j] % 2 == 1) ysign = -ysign;
    }
    const auto row = static_cast<Eigen::Index>(sc.encode_settings(x));
    double v = rng.uniform();
    std::size_t r = 0;
    for (; r + 1 < sc.outcome_tuples(); ++r) {
      v -= b.table()(row, static_cast<Eigen::Index>(r));
      if (v < 0.0) break;
    }
    int rsign = 1;
    for (int o : sc.decode_outcomes(r))
      if (o == 1) rsign = -rsign;
    return ysign * rsign == ccp.target(static_cast<Eigen::Index>(k));
  });
}

}  // namespace qgames
