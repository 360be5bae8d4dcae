#include "qgames/game_compiler.hpp"

#include <algorithm>
#include <cmath>

namespace qgames {

void GameSpec::validate() const {
  if (questions.empty() || questions.size() != answers.size()) throw ShapeError("game alphabets are malformed");
  const auto sc = scenario();
  if (static_cast<std::size_t>(question_dist.size()) != sc.setting_tuples() ||
      static_cast<std::size_t>(acceptance.rows()) != sc.setting_tuples() ||
      static_cast<std::size_t>(acceptance.cols()) != sc.outcome_tuples())
    throw ShapeError("game tables do not match the alphabets");
  if (question_dist.minCoeff() < 0.0 || std::abs(question_dist.sum() - 1.0) > 1e-12)
    throw DomainError("question distribution is not a probability vector");
  if (acceptance.minCoeff() < 0.0 || acceptance.maxCoeff() > 1.0) throw DomainError("acceptance entries must lie in [0, 1]");
}

double win_probability(const GameSpec& game, const Behavior& b) {
  if (!(b.scenario() == game.scenario())) throw ShapeError("behavior does not match the game alphabets");
  return game.question_dist.dot(game.acceptance.cwiseProduct(b.table()).rowwise().sum());
}

namespace {

std::size_t sample_index(const Eigen::Ref<const Eigen::VectorXd>& weights, RandomStream& rng) {
  double u = rng.uniform() * weights.sum();
  const auto n = static_cast<std::size_t>(weights.size());
  for (std::size_t i = 0; i < n; ++i) {
    u -= weights(static_cast<Eigen::Index>(i));
    if (u < 0.0) return i;
  }
  // Rounding can leave u marginally positive; fall back to the last supported entry.
  for (std::size_t i = n; i-- > 0;)
    if (weights(static_cast<Eigen::Index>(i)) > 0.0) return i;
  return n - 1;
}

}  // namespace

bool play_round(const GameSpec& game, const Behavior& b, RandomStream& rng) {
  const auto s = sample_index(game.question_dist, rng);
  const auto o = sample_index(b.table().row(static_cast<Eigen::Index>(s)).transpose(), rng);
  return rng.uniform() < game.acceptance(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(o));
}

bool is_normalized(const LinearInequality& ineq, double tol) {
  return ineq.coeffs.minCoeff() >= 0.0 && std::abs(ineq.coeffs.rowwise().maxCoeff().sum() - 1.0) <= tol;
}

LinearInequality normalize_linear(const LinearInequality& ineq) {
  ineq.validate();
  if (ineq.coeffs.size() == 0 || ineq.coeffs.cwiseAbs().maxCoeff() == 0.0)
    throw DomainError("cannot normalize an all-zero inequality");
  LinearInequality out = ineq;
  out.normalized = true;
  if (is_normalized(ineq)) return out;

  // a P(r|s) = a - sum_{r' != r} a P(r'|s): shifting a row by a constant
  // moves that constant into the bound.
  double shift = 0.0;
  for (Eigen::Index s = 0; s < out.coeffs.rows(); ++s) {
    const double lo = out.coeffs.row(s).minCoeff();
    if (lo < 0.0) {
      out.coeffs.row(s).array() -= lo;
      shift += lo;
    }
  }
  const double total = out.coeffs.rowwise().maxCoeff().sum();
  if (!(total > 0.0)) throw DomainError("inequality is constant on every behavior");
  out.coeffs /= total;
  const AffineRecord step{1.0 / total, -shift / total};
  out.affine = ineq.affine.then(step);
  out.bound = step.apply(ineq.bound);
  return out;
}

GameSpec compile_linear(const LinearInequality& ineq) {
  ineq.validate();
  if (!is_normalized(ineq, 1e-12)) throw PreconditionError("compile_linear needs a normalized inequality");
  GameSpec game;
  game.questions = ineq.scenario.settings();
  game.answers = ineq.scenario.outcomes();
  game.question_dist = ineq.coeffs.rowwise().maxCoeff();
  game.question_dist /= game.question_dist.sum();
  game.acceptance = Eigen::MatrixXd::Zero(ineq.coeffs.rows(), ineq.coeffs.cols());
  for (Eigen::Index s = 0; s < ineq.coeffs.rows(); ++s) {
    const double top = ineq.coeffs.row(s).maxCoeff();
    if (top > 0.0) game.acceptance.row(s) = (ineq.coeffs.row(s) / top).cwiseMin(1.0);
  }
  game.provenance = {"linear inequality", ineq.affine};
  return game;
}

CorrelatorInequality augment_sliwa(const CorrelatorInequality& ineq) {
  ineq.validate();
  if (!ineq.has_absent_slots()) return ineq;
  std::vector<int> settings = ineq.scenario.settings();
  std::vector<int> dummy(settings.size());
  for (std::size_t j = 0; j < settings.size(); ++j) dummy[j] = settings[j]++;
  CorrelatorInequality out;
  out.scenario = BellScenario(settings, ineq.scenario.outcomes());
  out.bound = ineq.bound;
  out.dummy = dummy;
  for (auto t : ineq.terms) {
    for (std::size_t j = 0; j < t.settings.size(); ++j)
      if (t.settings[j] == kAbsent) t.settings[j] = dummy[j];
    out.terms.push_back(std::move(t));
  }
  return out;
}

Behavior extend_with_dummy(const Behavior& b, const BellScenario& augmented) {
  const auto& base = b.scenario();
  if (augmented.parties() != base.parties() || augmented.outcomes() != base.outcomes())
    throw ShapeError("augmented scenario does not extend the behavior's scenario");
  for (int j = 0; j < base.parties(); ++j)
    if (augmented.settings(j) != base.settings(j) + 1) throw ShapeError("augmented scenario must add exactly one setting per party");
  const int n = base.parties();
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(augmented.setting_tuples()),
                                                static_cast<Eigen::Index>(augmented.outcome_tuples()));
  for (std::size_t s = 0; s < augmented.setting_tuples(); ++s) {
    auto st = augmented.decode_settings(s);
    std::vector<bool> dummy(n);
    for (int j = 0; j < n; ++j) {
      dummy[j] = st[j] == base.settings(j);
      if (dummy[j]) st[j] = 0;  // marginalize the real measurement away
    }
    const auto row = base.encode_settings(st);
    for (std::size_t r = 0; r < base.outcome_tuples(); ++r) {
      auto rt = base.decode_outcomes(r);
      for (int j = 0; j < n; ++j)
        if (dummy[j]) rt[j] = 0;
      table(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(augmented.encode_outcomes(rt))) += b.probability(row, r);
    }
  }
  return Behavior(augmented, std::move(table));
}

PolynomialInequality normalize_polynomial(const PolynomialInequality& ineq) {
  ineq.validate();
  double total = 0.0;
  for (const auto& m : ineq.monomials) {
    if (m.coeff < 0.0) throw DomainError("polynomial normalization needs nonnegative coefficients");
    total += m.coeff;
  }
  if (!(total > 0.0)) throw DomainError("cannot normalize an all-zero polynomial");
  PolynomialInequality out = ineq;
  for (auto& m : out.monomials) m.coeff /= total;
  const AffineRecord step{1.0 / total, 0.0};
  out.affine = ineq.affine.then(step);
  out.bound = step.apply(ineq.bound);
  out.normalized = true;
  return out;
}

MultiRoundGameSpec compile_polynomial(const PolynomialInequality& ineq) {
  ineq.validate();
  double total = 0.0;
  for (const auto& m : ineq.monomials) {
    if (m.coeff < 0.0) throw PreconditionError("compile_polynomial needs nonnegative coefficients");
    total += m.coeff;
  }
  if (std::abs(total - 1.0) > 1e-12) throw PreconditionError("compile_polynomial needs coefficients summing to 1");

  const auto& sc = ineq.scenario;
  MultiRoundGameSpec out;
  for (const auto& ev : ineq.events) {
    GameSpec g;
    g.questions = sc.settings();
    g.answers = sc.outcomes();
    g.question_dist = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sc.setting_tuples()));
    g.acceptance = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sc.setting_tuples()),
                                         static_cast<Eigen::Index>(sc.outcome_tuples()));
    const auto s = static_cast<Eigen::Index>(sc.encode_settings(ev.settings));
    g.question_dist(s) = 1.0;
    g.acceptance(s, static_cast<Eigen::Index>(sc.encode_outcomes(ev.outcomes))) = 1.0;
    g.provenance = {"polynomial event", {}};
    out.trials.push_back(std::move(g));
  }
  int max_degree = 0;
  for (const auto& m : ineq.monomials) max_degree = std::max(max_degree, m.degree());
  out.round_count_dist = Eigen::VectorXd::Zero(max_degree + 1);
  for (const auto& m : ineq.monomials) {
    out.monomial_probs.push_back(m.coeff);
    std::vector<int> plan;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) plan.insert(plan.end(), static_cast<std::size_t>(m.exponents[i]), static_cast<int>(i));
    out.round_plans.push_back(std::move(plan));
    out.round_count_dist(m.degree()) += m.coeff;
  }
  out.provenance = {"polynomial inequality", ineq.affine};
  return out;
}

double expected_success(const MultiRoundGameSpec& game, const Behavior& b) {
  std::vector<double> trial_win;
  for (const auto& t : game.trials) trial_win.push_back(win_probability(t, b));
  double total = 0.0;
  for (std::size_t m = 0; m < game.round_plans.size(); ++m) {
    double prod = game.monomial_probs[m];
    for (int i : game.round_plans[m]) prod *= trial_win[static_cast<std::size_t>(i)];
    total += prod;
  }
  return total;
}

bool play(const MultiRoundGameSpec& game, const Behavior& b, RandomStream& rng) {
  const Eigen::Map<const Eigen::VectorXd> probs(game.monomial_probs.data(), static_cast<Eigen::Index>(game.monomial_probs.size()));
  const auto m = sample_index(probs, rng);
  bool won = true;
  // Every round is played so the stream consumption is independent of outcomes.
  for (int i : game.round_plans[m]) won = play_round(game.trials[static_cast<std::size_t>(i)], b, rng) && won;
  return won;
}

void CcpSpec::validate() const {
  std::size_t total = 1;
  for (int k : input_sizes) {
    if (k < 1) throw ShapeError("input alphabets must be nonempty");
    total *= static_cast<std::size_t>(k);
  }
  if (static_cast<std::size_t>(input_dist.size()) != total || static_cast<std::size_t>(target.size()) != total)
    throw ShapeError("CCP tables do not match the input alphabets");
  if (input_dist.minCoeff() < 0.0 || std::abs(input_dist.sum() - 1.0) > 1e-12)
    throw DomainError("CCP input distribution is not a probability vector");
  for (const auto& c : channels)
    if (c.bits < 0) throw DomainError("channel bit budget must be nonnegative");
}

UffinkPoint uffink_point(const CorrelatorTable& e, const QuadraticInequality& ineq) {
  ineq.validate();
  if (!(e.scenario() == ineq.scenario)) throw ShapeError("correlator table does not match the inequality");
  const Eigen::VectorXd full = e.full();
  const double n = ineq.support;
  UffinkPoint pt;
  pt.p_g = 0.5 + ineq.g.dot(full) / (2.0 * n);
  pt.p_h = 0.5 + ineq.h.dot(full) / (2.0 * n);
  const double r2 = (pt.p_g - 0.5) * (pt.p_g - 0.5) + (pt.p_h - 0.5) * (pt.p_h - 0.5);
  pt.inside = r2 <= ineq.bound / (4.0 * n * n);
  return pt;
}

UffinkPoint uffink_point(const Behavior& b, const QuadraticInequality& ineq) {
  return uffink_point(behavior_to_correlators(b), ineq);
}

CcpSpec compile_uffink(const QuadraticInequality& ineq, double p1, double p2) {
  ineq.validate();
  const double n = ineq.support;
  const double r2 = (p1 - 0.5) * (p1 - 0.5) + (p2 - 0.5) * (p2 - 0.5);
  if (r2 <= ineq.bound / (4.0 * n * n)) throw PreconditionError("point lies inside the circle: no violation to certify");
  if (!(p1 + p2 > 0.0)) throw PreconditionError("p1 + p2 must be positive");

  const auto& sc = ineq.scenario;
  const int parties = sc.parties();
  CcpSpec ccp;
  ccp.base_settings = sc.settings();
  for (int j = 0; j < parties; ++j) ccp.input_sizes.push_back(2 * sc.settings(j) * 2);
  // One bit from every party to the last, which announces the product.
  for (int j = 0; j + 1 < parties; ++j) ccp.channels.push_back({j, parties - 1, 1});
  ccp.selector = UffinkSelector{p1, p2, p1 / (p1 + p2)};
  ccp.description = "Uffink quadratic inequality: selector z picks f_g or f_h";

  std::size_t total = 1;
  for (int k : ccp.input_sizes) total *= static_cast<std::size_t>(k);
  ccp.input_dist = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
  ccp.target = Eigen::VectorXi::Ones(static_cast<Eigen::Index>(total));
  const double y_weight = std::pow(0.5, parties);
  std::vector<int> input(parties);
  for (int z = 0; z < 2; ++z) {
    const Eigen::VectorXd& coeffs = z == 0 ? ineq.g : ineq.h;
    const double pz = z == 0 ? ccp.selector->prob_g : 1.0 - ccp.selector->prob_g;
    for (std::size_t s = 0; s < sc.setting_tuples(); ++s) {
      const double c = coeffs(static_cast<Eigen::Index>(s));
      if (c == 0.0) continue;
      const auto x = sc.decode_settings(s);
      for (std::size_t ys = 0; ys < (std::size_t{1} << parties); ++ys) {
        int product = 1;
        for (int j = 0; j < parties; ++j) {
          const int y = static_cast<int>((ys >> (parties - 1 - j)) & 1U);
          if (y == 1) product = -product;
          input[j] = (z * sc.settings(j) + x[j]) * 2 + y;
        }
        const auto idx = static_cast<Eigen::Index>(encode_tuple(input, ccp.input_sizes));
        ccp.input_dist(idx) = pz * std::abs(c) / n * y_weight;
        ccp.target(idx) = product * (c > 0 ? 1 : -1);
      }
    }
  }
  return ccp;
}

double product_protocol_success(const CcpSpec& ccp, const Behavior& b, std::optional<int> branch) {
  ccp.validate();
  const auto& sc = b.scenario();
  if (sc.settings() != ccp.base_settings || !sc.binary()) throw ShapeError("behavior does not match the CCP's Bell scenario");
  const int parties = sc.parties();
  double success = 0.0;
  double mass = 0.0;
  std::vector<int> x(parties);
  for (Eigen::Index k = 0; k < ccp.input_dist.size(); ++k) {
    const double w = ccp.input_dist(k);
    if (w == 0.0) continue;
    const auto input = decode_tuple(static_cast<std::size_t>(k), ccp.input_sizes);
    const int z = input[0] / 2 / sc.settings(0);
    if (branch && *branch != z) continue;
    int ysign = 1;
    for (int j = 0; j < parties; ++j) {
      x[j] = (input[j] / 2) % sc.settings(j);
      if (input[j] % 2 == 1) ysign = -ysign;
    }
    const auto row = sc.encode_settings(x);
    double p = 0.0;
    for (std::size_t r = 0; r < sc.outcome_tuples(); ++r) {
      const auto rt = sc.decode_outcomes(r);
      int rsign = 1;
      for (int v : rt)
        if (v == 1) rsign = -rsign;
      if (ysign * rsign == ccp.target(k)) p += b.probability(row, r);
    }
    success += w * p;
    mass += w;
  }
  if (!(mass > 0.0)) throw PreconditionError("selected branch has no probability mass");
  return success / mass;
}

}  // namespace qgames
