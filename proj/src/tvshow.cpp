#include "qgames/tvshow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qgames::tvshow {

CcpFunction parse_function(const std::string& id) {
  if (id == "f") return CcpFunction::f;
  if (id == "fm" || id == "f_m") return CcpFunction::f_m;
  if (id == "const" || id == "constant") return CcpFunction::constant;
  throw DomainError("unknown CCP function '" + id + "' (expected f, fm or const)");
}

std::string to_string(CcpFunction fn) {
  switch (fn) {
    case CcpFunction::f: return "f";
    case CcpFunction::f_m: return "fm";
    case CcpFunction::constant: return "const";
  }
  return "?";
}

std::string to_string(ResourceClass c) {
  switch (c) {
    case ResourceClass::D: return "D";
    case ResourceClass::R: return "R";
    case ResourceClass::Q: return "Q";
    case ResourceClass::C: return "C";
    case ResourceClass::N: return "N";
  }
  return "?";
}

void CcpInstance::validate() const {
  const auto bit = [](int v) { return v == 0 || v == 1; };
  if (!bit(x_a) || !bit(y_a) || !bit(y_b) || (x_b && !bit(*x_b))) throw DomainError("CCP inputs must be bits");
  if (function == CcpFunction::f && !x_b) throw DomainError("f needs x_b");
}

int CcpInstance::target() const {
  switch (function) {
    case CcpFunction::f: return x_a ^ x_b.value_or(0) ^ (y_a & y_b);
    case CcpFunction::f_m: return x_a ^ (y_a & y_b);
    case CcpFunction::constant: return 0;
  }
  return 0;
}

CcpInstance decode_input(int index) {
  CcpInstance in;
  in.x_a = (index >> 2) & 1;
  in.y_a = (index >> 1) & 1;
  in.y_b = index & 1;
  return in;
}

OneWayTables OneWayTables::from_index(int index) {
  if (index < 0 || index >= 256) throw DomainError("one-way strategy index must lie in [0, 256)");
  OneWayTables t;
  for (int k = 0; k < 4; ++k) {
    t.message[k] = (index >> (7 - k)) & 1;
    t.answer[k] = (index >> (3 - k)) & 1;
  }
  return t;
}

int OneWayTables::index() const {
  int idx = 0;
  for (int k = 0; k < 4; ++k) idx |= message[k] << (7 - k);
  for (int k = 0; k < 4; ++k) idx |= answer[k] << (3 - k);
  return idx;
}

int OneWayTables::output(const CcpInstance& in) const {
  const int m = message[2 * in.x_a + in.y_a];
  return answer[2 * m + in.y_b];
}

GameSpec one_way_ccp_game(CcpFunction fn) {
  // Bob's question carries x_b for f; his answer t encodes output (t >> m) & 1.
  const int bob_questions = fn == CcpFunction::f ? 4 : 2;
  GameSpec g;
  g.questions = {4, bob_questions};
  g.answers = {2, 4};
  const int tuples = 4 * bob_questions;
  g.question_dist = Eigen::VectorXd::Constant(tuples, 1.0 / tuples);
  g.acceptance = Eigen::MatrixXd::Zero(tuples, 8);
  for (int qa = 0; qa < 4; ++qa)
    for (int qb = 0; qb < bob_questions; ++qb) {
      CcpInstance in;
      in.function = fn;
      in.x_a = qa >> 1;
      in.y_a = qa & 1;
      in.y_b = qb & 1;
      if (fn == CcpFunction::f) in.x_b = qb >> 1;
      for (int m = 0; m < 2; ++m)
        for (int t = 0; t < 4; ++t) {
          // Bob's table outputs (t >> m) & 1; for f he XORs in x_b.
          const int out = ((t >> m) & 1) ^ in.x_b.value_or(0);
          g.acceptance(qa * bob_questions + qb, m * 4 + t) = out == in.target() ? 1.0 : 0.0;
        }
    }
  g.provenance = {"one-way 1-bit CCP for " + to_string(fn), {}};
  return g;
}

namespace {

/// f with simultaneous one-bit messages both ways; both answers must be
/// right. Alice's answer table is indexed by (x_a, y_a, Bob's bit), Bob's
/// likewise. Correctness over the 16 inputs is packed into 16-bit masks.
double two_way_f_value(std::uint64_t& evaluated) {
  int best = 0;
  evaluated = 0;
  for (int ma = 0; ma < 16; ++ma)
    for (int mb = 0; mb < 16; ++mb) {
      std::array<std::uint16_t, 256> alice{}, bob{};
      for (int t = 0; t < 256; ++t)
        for (int in = 0; in < 16; ++in) {
          const int xa = (in >> 3) & 1, ya = (in >> 2) & 1, xb = (in >> 1) & 1, yb = in & 1;
          const int f = xa ^ xb ^ (ya & yb);
          const int bit_a = (ma >> (2 * xa + ya)) & 1;
          const int bit_b = (mb >> (2 * xb + yb)) & 1;
          if (((t >> ((2 * xa + ya) * 2 + bit_b)) & 1) == f) alice[t] |= static_cast<std::uint16_t>(1U << in);
          if (((t >> ((2 * xb + yb) * 2 + bit_a)) & 1) == f) bob[t] |= static_cast<std::uint16_t>(1U << in);
        }
      for (int a = 0; a < 256; ++a)
        for (int b = 0; b < 256; ++b) best = std::max(best, std::popcount(static_cast<unsigned>(alice[a] & bob[b])));
      evaluated += 256 * 256;
    }
  return best / 16.0;
}

}  // namespace

ValueReport ccp_classical_value(CcpFunction fn, const SolverConfig& cfg) {
  if (fn == CcpFunction::f) {
    ValueReport rep;
    rep.method = Method::enumeration;
    rep.value = two_way_f_value(rep.iterations);
    rep.certificate = {{"function", "f"}, {"communication", "one bit each way, both answer"}};
    return rep;
  }
  auto rep = classical_value(one_way_ccp_game(fn), cfg);
  rep.certificate["function"] = to_string(fn);
  rep.certificate["communication"] = "one bit from Alice to Bob";
  return rep;
}

double quantum_success(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("Werner weight must lie in [0, 1]");
  return 0.5 * (1.0 + std::sqrt(2.0) * p / 2.0);
}

ValueReport ccp_quantum_value(CcpFunction fn, double p) {
  ValueReport rep;
  rep.method = Method::analytic;
  rep.value = fn == CcpFunction::constant ? (quantum_success(p), 1.0) : quantum_success(p);
  rep.certificate = {{"function", to_string(fn)}, {"p", p}, {"state", "werner"}, {"frame", "chsh"}};
  return rep;
}

namespace {

Eigen::Matrix2d correlators_in_frame(double p, const MeasurementFramed& frame) {
  const auto state = make_werner(p);
  Eigen::Matrix2d e;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) e(x, y) = correlator(state, frame.alice.at(x), frame.bob.at(y));
  return e;
}

double chsh_sign(int x, int y) { return x == 1 && y == 1 ? -1.0 : 1.0; }

std::array<double, kInputs> per_input(double p, const MeasurementFramed& frame) {
  const auto e = correlators_in_frame(p, frame);
  std::array<double, kInputs> out{};
  for (int k = 0; k < kInputs; ++k) {
    const auto in = decode_input(k);
    out[k] = 0.5 * (1.0 + chsh_sign(in.y_a, in.y_b) * e(in.y_a, in.y_b));
  }
  return out;
}

}  // namespace

ValueReport ccp_quantum_simulate(CcpFunction fn, double p, std::uint64_t n, std::uint64_t seed, unsigned threads) {
  const auto state = make_werner(p);
  const auto frame = chsh_optimal_frame<double>();
  auto rep = monte_carlo_estimate(n, seed, threads, [&](RandomStream& rng) {
    CcpInstance in;
    in.function = fn;
    in.x_a = rng.bit();
    in.y_a = rng.bit();
    in.y_b = rng.bit();
    if (fn == CcpFunction::f) in.x_b = rng.bit();
    const auto [alpha, beta] = sample_outcomes(state, frame.alice[in.y_a], frame.bob[in.y_b], rng);
    const int a = alpha == 1 ? 0 : 1;
    const int b = beta == 1 ? 0 : 1;
    if (fn == CcpFunction::constant) return true;
    const int m = in.x_a ^ a;
    if (fn == CcpFunction::f_m) return (m ^ b) == in.target();
    // Both parties compute x_a ^ a ^ x_b ^ b from their own data and the other's bit.
    const int bob_out = m ^ b ^ *in.x_b;
    const int alice_out = (*in.x_b ^ b) ^ in.x_a ^ a;
    return bob_out == in.target() && alice_out == in.target();
  });
  rep.certificate["function"] = to_string(fn);
  rep.certificate["p"] = p;
  return rep;
}

Eigen::Matrix2d werner_correlators(double p) { return correlators_in_frame(p, chsh_optimal_frame<double>()); }

std::array<double, kInputs> quantum_success_per_input(double p) { return per_input(p, chsh_optimal_frame<double>()); }

void TvStrategy::validate() const {
  for (int v : tables.message)
    if (v != 0 && v != 1) throw DomainError("message table entries must be bits");
  for (int v : tables.answer)
    if (v != 0 && v != 1) throw DomainError("answer table entries must be bits");
  if (resource == ResourceClass::Q || resource == ResourceClass::N) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("Werner weight must lie in [0, 1]");
    if (frame.alice.size() != 2 || frame.bob.size() != 2) throw ShapeError("TV-show frame needs two settings per party");
  }
  if (resource == ResourceClass::C) {
    double total = 0.0;
    for (const auto& [idx, w] : shared_mixture) {
      if (idx < 0 || idx >= 256 || w < 0.0) throw DomainError("malformed shared mixture");
      total += w;
    }
    if (!shared_mixture.empty() && std::abs(total - 1.0) > 1e-9) throw DomainError("shared mixture is not normalized");
  }
}

TvStrategy coin_on_bad_branch() {
  TvStrategy s;
  s.resource = ResourceClass::R;
  s.tables.message = {0, 0, 1, 1};  // g0 = x_a
  s.tables.answer = {0, 0, 1, 1};   // answer m
  s.coin_mask = {false, true, false, true};  // y_b = 1: coin
  return s;
}

namespace {

double deterministic_success(const OneWayTables& t, const CcpInstance& in) { return t.output(in) == in.target() ? 1.0 : 0.0; }

}  // namespace

ValueReport tv_value(const TvStrategy& s, const SolverConfig& cfg) {
  s.validate();
  ValueReport rep;
  rep.method = Method::enumeration;
  switch (s.resource) {
    case ResourceClass::D:
    case ResourceClass::R: {
      double worst = 1.0;
      for (int k = 0; k < kInputs; ++k) {
        const auto in = decode_input(k);
        const int m = s.tables.message[2 * in.x_a + in.y_a];
        const bool coin = s.resource == ResourceClass::R && s.coin_mask[2 * m + in.y_b];
        worst = std::min(worst, coin ? 0.5 : deterministic_success(s.tables, in));
      }
      rep.value = worst;
      rep.certificate = {{"message", s.tables.message}, {"answer", s.tables.answer}};
      if (s.resource == ResourceClass::R) rep.certificate["coin_mask"] = s.coin_mask;
      rep.iterations = kInputs;
      return rep;
    }
    case ResourceClass::Q: {
      const auto succ = per_input(s.p, s.frame);
      rep.value = *std::min_element(succ.begin(), succ.end());
      rep.method = Method::analytic;
      rep.certificate = {{"p", s.p}, {"per_input", succ}};
      return rep;
    }
    case ResourceClass::C: {
      if (s.shared_mixture.empty()) return shared_value(cfg);
      double worst = 1.0;
      for (int k = 0; k < kInputs; ++k) {
        const auto in = decode_input(k);
        double v = 0.0;
        for (const auto& [idx, w] : s.shared_mixture) v += w * deterministic_success(OneWayTables::from_index(idx), in);
        worst = std::min(worst, v);
      }
      rep.value = worst;
      rep.certificate = {{"mixture_size", s.shared_mixture.size()}};
      return rep;
    }
    case ResourceClass::N: {
      const auto e = correlators_in_frame(s.p, s.frame);
      NhvOptions options;
      options.pivot_limit = cfg.lp_pivot_limit;
      return nhv_adversarial_value(
          e, [](int a, int b, int x, int y) { return a * b == static_cast<int>(chsh_sign(x, y)); }, options);
    }
  }
  return rep;
}

namespace {

OneWayTables tables_of(const DeterministicStrategy& d) {
  OneWayTables t;
  for (int k = 0; k < 4; ++k) t.message[k] = d.tables[0][k];
  for (int yb = 0; yb < 2; ++yb)
    for (int m = 0; m < 2; ++m) t.answer[2 * m + yb] = (d.tables[1][yb] >> m) & 1;
  return t;
}

}  // namespace

ValueReport deterministic_value(const SolverConfig& cfg) {
  const auto game = one_way_ccp_game(CcpFunction::f_m);
  auto rep = worst_case_deterministic_value(game, cfg);
  DeterministicStrategy d;
  d.tables = rep.certificate["tables"].get<std::vector<std::vector<int>>>();
  const auto t = tables_of(d);
  rep.certificate = {{"message", t.message}, {"answer", t.answer}};
  return rep;
}

ValueReport shared_value(const SolverConfig& cfg) {
  const auto game = one_way_ccp_game(CcpFunction::f_m);
  auto rep = shared_randomness_value(game, true, cfg);
  // Re-express team strategies as one-way table indices.
  const auto sc = game.scenario();
  nlohmann::json mixture = nlohmann::json::array();
  for (const auto& entry : rep.certificate["team_mixture"]) {
    const auto t = tables_of(decode_strategy(sc, entry["strategy"].get<std::uint64_t>()));
    mixture.push_back({{"tables", t.index()}, {"message", t.message}, {"answer", t.answer}, {"weight", entry["weight"]}});
  }
  rep.certificate["team_mixture"] = mixture;
  return rep;
}

double nhv_bound(double p) { return std::max(std::sqrt(2.0) * p - 1.0, 0.0); }

ValueReport nhv_value(double p, const SolverConfig& cfg) {
  TvStrategy s;
  s.resource = ResourceClass::N;
  s.p = p;
  return tv_value(s, cfg);
}

ValueReport private_randomness_estimate(int restarts, std::uint64_t seed) {
  if (restarts < 1) throw DomainError("need at least one restart");
  // success(k, yb) = sum_m P(m | k) P(correct | m, yb, k)
  std::array<double, 4> alice{};   // P(m = 1 | 2 x_a + y_a)
  std::array<double, 4> bob{};     // P(out = 1 | 2 m + y_b)
  const auto correct = [&](int m, const CcpInstance& in) {
    const double r = bob[2 * m + in.y_b];
    return in.target() == 1 ? r : 1.0 - r;
  };
  const auto success = [&](const CcpInstance& in) {
    const double q = alice[2 * in.x_a + in.y_a];
    return (1.0 - q) * correct(0, in) + q * correct(1, in);
  };
  const auto worst = [&] {
    double w = 1.0;
    for (int k = 0; k < kInputs; ++k) w = std::min(w, success(decode_input(k)));
    return w;
  };

  double best = -1.0;
  std::array<double, 4> best_alice{}, best_bob{};
  std::uint64_t sweeps = 0;
  for (int restart = 0; restart < restarts; ++restart) {
    RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
    for (auto& r : bob) r = rng.uniform();
    for (auto& q : alice) q = rng.uniform();
    double current = worst();
    for (int it = 0; it < 200; ++it, ++sweeps) {
      // Alice: each of her inputs faces min over y_b of two affine functions of q.
      for (int xa = 0; xa < 2; ++xa)
        for (int ya = 0; ya < 2; ++ya) {
          double lo[2], hi[2];
          for (int yb = 0; yb < 2; ++yb) {
            CcpInstance in{xa, ya, std::nullopt, yb, CcpFunction::f_m};
            lo[yb] = correct(0, in);
            hi[yb] = correct(1, in);
          }
          double cands[3] = {0.0, 1.0, 0.0};
          const double denom = (hi[0] - lo[0]) - (hi[1] - lo[1]);
          cands[2] = std::abs(denom) > 1e-15 ? std::clamp((lo[1] - lo[0]) / denom, 0.0, 1.0) : 0.0;
          double arg = alice[2 * xa + ya];
          double val = -1.0;
          for (double q : cands) {
            const double v = std::min((1 - q) * lo[0] + q * hi[0], (1 - q) * lo[1] + q * hi[1]);
            if (v > val + 1e-15) {
              val = v;
              arg = q;
            }
          }
          alice[2 * xa + ya] = arg;
        }
      // Bob: LP over his four answer probabilities.
      // Variables: r[4], t, slack[8], cap[4]; maximize t.
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(12, 17);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(12);
      Eigen::VectorXd c = Eigen::VectorXd::Zero(17);
      c(4) = -1.0;
      for (int k = 0; k < kInputs; ++k) {
        const auto in = decode_input(k);
        const double q = alice[2 * in.x_a + in.y_a];
        double constant = 0.0;
        for (int m = 0; m < 2; ++m) {
          const double pm = m == 0 ? 1.0 - q : q;
          if (in.target() == 1) {
            a(k, 2 * m + in.y_b) += pm;
          } else {
            constant += pm;
            a(k, 2 * m + in.y_b) -= pm;
          }
        }
        a(k, 4) = -1.0;
        a(k, 5 + k) = -1.0;
        b(k) = -constant;
      }
      for (int j = 0; j < 4; ++j) {
        a(8 + j, j) = 1.0;
        a(8 + j, 13 + j) = 1.0;
        b(8 + j) = 1.0;
      }
      const auto sol = solve_lp<double>(c, a, b);
      for (int j = 0; j < 4; ++j) bob[j] = std::clamp(sol.x(j), 0.0, 1.0);
      const double next = worst();
      const bool done = next - current < 1e-12;
      current = std::max(current, next);
      if (done) break;
    }
    if (current > best) {
      best = current;
      best_alice = alice;
      best_bob = bob;
    }
  }
  ValueReport rep;
  rep.value = best;
  rep.method = Method::lp;
  rep.iterations = sweeps;
  rep.certificate = {{"alice_p_message_1", best_alice},
                     {"bob_p_output_1", best_bob},
                     {"restarts", restarts},
                     {"note", "alternating maximization; a lower bound on the private-randomness max-min"}};
  return rep;
}

ResourceRow tv_resource_table(double p, const SolverConfig& cfg) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("Werner weight must lie in [0, 1]");
  ResourceRow row;
  row.p = p;
  row.d = deterministic_value(cfg);
  row.r = tv_value(coin_on_bad_branch(), cfg);
  TvStrategy q;
  q.resource = ResourceClass::Q;
  q.p = p;
  row.q = tv_value(q, cfg);
  row.c = shared_value(cfg);
  row.n_lp = nhv_value(p, cfg);
  row.n_bound = nhv_bound(p);
  return row;
}

CollapseReport verify_deterministic_collapse() {
  CollapseReport rep;
  rep.max_min = 0.0;
  for (int idx = 0; idx < 256; ++idx) {
    const auto t = OneWayTables::from_index(idx);
    double worst = 1.0;
    for (int k = 0; k < kInputs; ++k) {
      worst = std::min(worst, deterministic_success(t, decode_input(k)));
      ++rep.cases;
    }
    rep.max_min = std::max(rep.max_min, worst);
    ++rep.strategies;
  }
  rep.collapsed = rep.max_min == 0.0;
  return rep;
}

std::vector<CcpInstance> failing_inputs(const OneWayTables& tables) {
  std::vector<CcpInstance> out;
  for (int k = 0; k < kInputs; ++k) {
    const auto in = decode_input(k);
    if (tables.output(in) != in.target()) out.push_back(in);
  }
  return out;
}

}  // namespace qgames::tvshow
