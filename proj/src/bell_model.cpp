#include "qgames/bell_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qgames {

std::size_t encode_tuple(const std::vector<int>& digits, const std::vector<int>& radix) {
  if (digits.size() != radix.size()) throw ShapeError("tuple length does not match the number of parties");
  std::size_t index = 0;
  for (std::size_t j = 0; j < radix.size(); ++j) {
    if (digits[j] < 0 || digits[j] >= radix[j]) throw ShapeError("tuple digit out of range");
    index = index * static_cast<std::size_t>(radix[j]) + static_cast<std::size_t>(digits[j]);
  }
  return index;
}

std::vector<int> decode_tuple(std::size_t index, const std::vector<int>& radix) {
  std::vector<int> digits(radix.size());
  for (std::size_t j = radix.size(); j-- > 0;) {
    digits[j] = static_cast<int>(index % static_cast<std::size_t>(radix[j]));
    index /= static_cast<std::size_t>(radix[j]);
  }
  return digits;
}

namespace {

std::size_t checked_product(const std::vector<int>& v, std::uint64_t cap, const char* what) {
  long double p = 1;
  for (int x : v) p *= x;
  if (p > static_cast<long double>(cap)) throw SizeError(what, static_cast<std::uint64_t>(std::min<long double>(p, 1.8e19L)), cap);
  return static_cast<std::size_t>(p);
}

}  // namespace

BellScenario::BellScenario(std::vector<int> settings, std::vector<int> outcomes, std::uint64_t cap)
    : settings_(std::move(settings)), outcomes_(std::move(outcomes)) {
  if (settings_.empty()) throw ShapeError("scenario needs at least one party");
  if (settings_.size() != outcomes_.size()) throw ShapeError("settings and outcomes lists differ in length");
  for (int m : settings_)
    if (m < 1) throw ShapeError("every party needs at least one setting");
  for (int d : outcomes_)
    if (d < 2) throw ShapeError("every party needs at least two outcomes");
  setting_tuples_ = checked_product(settings_, cap, "setting tuples");
  outcome_tuples_ = checked_product(outcomes_, cap, "outcome tuples");
  long double entries = static_cast<long double>(setting_tuples_) * static_cast<long double>(outcome_tuples_);
  if (entries > static_cast<long double>(cap))
    throw SizeError("behavior table entries", static_cast<std::uint64_t>(entries), cap);
}

bool BellScenario::binary() const {
  return std::all_of(outcomes_.begin(), outcomes_.end(), [](int d) { return d == 2; });
}

std::size_t BellScenario::encode_settings(const std::vector<int>& s) const { return encode_tuple(s, settings_); }
std::size_t BellScenario::encode_outcomes(const std::vector<int>& r) const { return encode_tuple(r, outcomes_); }
std::vector<int> BellScenario::decode_settings(std::size_t i) const { return decode_tuple(i, settings_); }
std::vector<int> BellScenario::decode_outcomes(std::size_t i) const { return decode_tuple(i, outcomes_); }

Behavior::Behavior(BellScenario scenario, Eigen::MatrixXd table)
    : scenario_(std::move(scenario)), table_(std::move(table)) {
  if (static_cast<std::size_t>(table_.rows()) != scenario_.setting_tuples() ||
      static_cast<std::size_t>(table_.cols()) != scenario_.outcome_tuples())
    throw ShapeError("behavior table shape does not match its scenario");
  if (table_.size() > 0 && table_.minCoeff() < -1e-12) throw DomainError("behavior has a negative probability");
  for (Eigen::Index s = 0; s < table_.rows(); ++s)
    if (std::abs(table_.row(s).sum() - 1.0) > 1e-10) throw DomainError("behavior row does not sum to 1");
}

bool Behavior::is_no_signaling(double tol) const {
  const int n = scenario_.parties();
  for (int j = 0; j < n; ++j) {
    // Marginal of party j at setting x_j must not depend on the other settings.
    std::vector<Eigen::VectorXd> reference(scenario_.settings(j));
    std::vector<bool> seen(scenario_.settings(j), false);
    for (std::size_t s = 0; s < scenario_.setting_tuples(); ++s) {
      const auto st = scenario_.decode_settings(s);
      Eigen::VectorXd marginal = Eigen::VectorXd::Zero(scenario_.outcomes(j));
      for (std::size_t r = 0; r < scenario_.outcome_tuples(); ++r)
        marginal(scenario_.decode_outcomes(r)[j]) += table_(s, r);
      if (!seen[st[j]]) {
        reference[st[j]] = marginal;
        seen[st[j]] = true;
      } else if ((reference[st[j]] - marginal).cwiseAbs().maxCoeff() > tol) {
        return false;
      }
    }
  }
  return true;
}

void LinearInequality::validate() const {
  if (static_cast<std::size_t>(coeffs.rows()) != scenario.setting_tuples() ||
      static_cast<std::size_t>(coeffs.cols()) != scenario.outcome_tuples())
    throw ShapeError("coefficient table shape does not match its scenario");
  if (!(affine.scale > 0)) throw DomainError("affine record needs a positive scale");
}

bool CorrelatorInequality::has_absent_slots() const {
  for (const auto& t : terms)
    for (int s : t.settings)
      if (s == kAbsent) return true;
  return false;
}

void CorrelatorInequality::validate() const {
  if (!scenario.binary()) throw DomainError("correlator inequalities need binary outcomes");
  bool nonzero = false;
  for (const auto& t : terms) {
    if (static_cast<int>(t.settings.size()) != scenario.parties())
      throw ShapeError("correlator term has the wrong number of parties");
    for (int j = 0; j < scenario.parties(); ++j)
      if (t.settings[j] != kAbsent && (t.settings[j] < 0 || t.settings[j] >= scenario.settings(j)))
        throw ShapeError("correlator term setting out of range");
    nonzero = nonzero || t.coeff != 0.0;
  }
  if (!nonzero) throw DomainError("correlator inequality has no nonzero coefficient");
  if (!dummy.empty() && static_cast<int>(dummy.size()) != scenario.parties())
    throw ShapeError("dummy list has the wrong number of parties");
}

CorrelatorTable::CorrelatorTable(BellScenario scenario, Eigen::VectorXd values)
    : scenario_(std::move(scenario)), values_(std::move(values)) {
  if (!scenario_.binary()) throw DomainError("correlator tables need binary outcomes");
  std::size_t expected = 1;
  for (int m : scenario_.settings()) expected *= static_cast<std::size_t>(m + 1);
  if (static_cast<std::size_t>(values_.size()) != expected) throw ShapeError("correlator table has the wrong size");
}

CorrelatorTable CorrelatorTable::from_full(const BellScenario& scenario, const Eigen::VectorXd& full) {
  if (static_cast<std::size_t>(full.size()) != scenario.setting_tuples())
    throw ShapeError("full correlator vector has the wrong size");
  std::vector<int> radix;
  for (int m : scenario.settings()) radix.push_back(m + 1);
  std::size_t total = 1;
  for (int r : radix) total *= static_cast<std::size_t>(r);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
  for (std::size_t s = 0; s < scenario.setting_tuples(); ++s)
    values(static_cast<Eigen::Index>(encode_tuple(scenario.decode_settings(s), radix))) = full(static_cast<Eigen::Index>(s));
  return CorrelatorTable(scenario, std::move(values));
}

std::vector<int> CorrelatorTable::radix() const {
  std::vector<int> radix;
  for (int m : scenario_.settings()) radix.push_back(m + 1);
  return radix;
}

double CorrelatorTable::at(const std::vector<int>& settings) const {
  auto digits = settings;
  if (static_cast<int>(digits.size()) != scenario_.parties()) throw ShapeError("correlator lookup has the wrong arity");
  for (int j = 0; j < scenario_.parties(); ++j)
    if (digits[j] == kAbsent) digits[j] = scenario_.settings(j);
  return values_(static_cast<Eigen::Index>(encode_tuple(digits, radix())));
}

Eigen::VectorXd CorrelatorTable::full() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(scenario_.setting_tuples()));
  const auto rad = radix();
  for (std::size_t s = 0; s < scenario_.setting_tuples(); ++s)
    out(static_cast<Eigen::Index>(s)) = values_(static_cast<Eigen::Index>(encode_tuple(scenario_.decode_settings(s), rad)));
  return out;
}

void QuadraticInequality::validate() const {
  const auto n = static_cast<Eigen::Index>(scenario.setting_tuples());
  if (!scenario.binary()) throw DomainError("quadratic inequalities need binary outcomes");
  if (g.size() != n || h.size() != n) throw ShapeError("quadratic coefficient tensors do not match the scenario");
  const auto unit = [](const Eigen::VectorXd& v) {
    return (v.array() == 0.0 || v.array() == 1.0 || v.array() == -1.0).all();
  };
  if (!unit(g) || !unit(h)) throw DomainError("quadratic coefficients must lie in {-1, 0, 1}");
  if (support <= 0) throw DomainError("quadratic support N must be positive");
  if (g.cwiseAbs().sum() != support || h.cwiseAbs().sum() != support)
    throw DomainError("sum |g| and sum |h| must both equal N");
}

int Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

void PolynomialInequality::validate() const {
  for (const auto& e : events) {
    scenario.encode_settings(e.settings);
    scenario.encode_outcomes(e.outcomes);
  }
  for (const auto& m : monomials) {
    if (m.exponents.size() != events.size()) throw ShapeError("monomial exponent vector does not match the event list");
    for (int k : m.exponents)
      if (k < 0) throw DomainError("monomial exponents must be nonnegative");
  }
  if (!(affine.scale > 0)) throw DomainError("affine record needs a positive scale");
}

namespace {

void require_same(const BellScenario& a, const BellScenario& b) {
  if (!(a == b)) throw ShapeError("scenario mismatch");
}

}  // namespace

double evaluate_linear(const LinearInequality& ineq, const Behavior& b) {
  require_same(ineq.scenario, b.scenario());
  return ineq.coeffs.cwiseProduct(b.table()).sum();
}

double evaluate_correlator(const CorrelatorInequality& ineq, const CorrelatorTable& e) {
  require_same(ineq.scenario, e.scenario());
  double lhs = 0.0;
  for (const auto& t : ineq.terms) lhs += t.coeff * e.at(t.settings);
  return lhs;
}

CorrelatorTable behavior_to_correlators(const Behavior& b) {
  const auto& sc = b.scenario();
  if (!sc.binary()) throw DomainError("correlators need binary outcomes");
  std::vector<int> radix;
  for (int m : sc.settings()) radix.push_back(m + 1);
  std::size_t total = 1;
  for (int r : radix) total *= static_cast<std::size_t>(r);
  Eigen::VectorXd values(static_cast<Eigen::Index>(total));
  const int n = sc.parties();
  for (std::size_t k = 0; k < total; ++k) {
    auto ext = decode_tuple(k, radix);
    std::vector<int> s(n);
    std::vector<bool> present(n);
    for (int j = 0; j < n; ++j) {
      present[j] = ext[j] < sc.settings(j);
      // Absent parties are marginalized at setting 0; exact under no-signaling.
      s[j] = present[j] ? ext[j] : 0;
    }
    const auto row = sc.encode_settings(s);
    double e = 0.0;
    for (std::size_t r = 0; r < sc.outcome_tuples(); ++r) {
      const auto rt = sc.decode_outcomes(r);
      int sign = 1;
      for (int j = 0; j < n; ++j)
        if (present[j] && rt[j] == 1) sign = -sign;
      e += sign * b.probability(row, r);
    }
    values(static_cast<Eigen::Index>(k)) = e;
  }
  return CorrelatorTable(sc, std::move(values));
}

QuadraticValue evaluate_quadratic(const QuadraticInequality& ineq, const CorrelatorTable& e) {
  require_same(ineq.scenario, e.scenario());
  const Eigen::VectorXd full = e.full();
  const double sg = ineq.g.dot(full);
  const double sh = ineq.h.dot(full);
  const double lhs = sg * sg + sh * sh;
  return {lhs, lhs > ineq.bound};
}

double evaluate_polynomial(const PolynomialInequality& ineq, const Behavior& b) {
  require_same(ineq.scenario, b.scenario());
  std::vector<double> p;
  p.reserve(ineq.events.size());
  for (const auto& ev : ineq.events)
    p.push_back(b.probability(ineq.scenario.encode_settings(ev.settings), ineq.scenario.encode_outcomes(ev.outcomes)));
  double lhs = 0.0;
  for (const auto& m : ineq.monomials) {
    double term = m.coeff;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (m.exponents[i] > 0) term *= std::pow(p[i], m.exponents[i]);
    lhs += term;
  }
  return lhs;
}

LinearInequality expand_correlator(const CorrelatorInequality& ineq) {
  ineq.validate();
  if (ineq.has_absent_slots()) throw PreconditionError("augment absent parties before expanding");
  const auto& sc = ineq.scenario;
  LinearInequality out{sc, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sc.setting_tuples()),
                                                 static_cast<Eigen::Index>(sc.outcome_tuples())),
                       ineq.bound, false, {}};
  for (const auto& t : ineq.terms) {
    const auto s = sc.encode_settings(t.settings);
    for (std::size_t r = 0; r < sc.outcome_tuples(); ++r) {
      const auto rt = sc.decode_outcomes(r);
      const int ones = static_cast<int>(std::count(rt.begin(), rt.end(), 1));
      out.coeffs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) += (ones % 2 == 0 ? 1.0 : -1.0) * t.coeff;
    }
  }
  return out;
}

Behavior deterministic_behavior(const BellScenario& sc, const std::vector<std::vector<int>>& strategy) {
  if (static_cast<int>(strategy.size()) != sc.parties()) throw ShapeError("strategy has the wrong number of parties");
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sc.setting_tuples()),
                                                static_cast<Eigen::Index>(sc.outcome_tuples()));
  std::vector<int> r(sc.parties());
  for (std::size_t s = 0; s < sc.setting_tuples(); ++s) {
    const auto st = sc.decode_settings(s);
    for (int j = 0; j < sc.parties(); ++j) r[j] = strategy[j].at(st[j]);
    table(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(sc.encode_outcomes(r))) = 1.0;
  }
  return Behavior(sc, std::move(table));
}

std::uint64_t deterministic_strategy_count(const BellScenario& sc) {
  long double count = 1;
  for (int j = 0; j < sc.parties(); ++j) count *= std::pow(static_cast<long double>(sc.outcomes(j)), sc.settings(j));
  if (count >= 1.8e19L) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(count);
}

namespace {

/// Iterates over all deterministic strategies of `sc` in mixed-radix order.
template <typename Fn>
void for_each_deterministic(const BellScenario& sc, std::uint64_t cap, Fn&& fn) {
  const auto count = deterministic_strategy_count(sc);
  if (count > cap) throw SizeError("deterministic strategies", count, cap);
  std::vector<int> radix;
  for (int j = 0; j < sc.parties(); ++j)
    for (int x = 0; x < sc.settings(j); ++x) radix.push_back(sc.outcomes(j));
  std::vector<std::vector<int>> strategy(sc.parties());
  for (int j = 0; j < sc.parties(); ++j) strategy[j].assign(sc.settings(j), 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto digits = decode_tuple(static_cast<std::size_t>(k), radix);
    std::size_t pos = 0;
    for (int j = 0; j < sc.parties(); ++j)
      for (int x = 0; x < sc.settings(j); ++x) strategy[j][x] = digits[pos++];
    fn(strategy);
  }
}

}  // namespace

double local_bound(const LinearInequality& ineq, std::uint64_t cap) {
  ineq.validate();
  const auto& sc = ineq.scenario;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> r(sc.parties());
  for_each_deterministic(sc, cap, [&](const std::vector<std::vector<int>>& strat) {
    double v = 0.0;
    for (std::size_t s = 0; s < sc.setting_tuples(); ++s) {
      const auto st = sc.decode_settings(s);
      for (int j = 0; j < sc.parties(); ++j) r[j] = strat[j][st[j]];
      v += ineq.coeffs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(sc.encode_outcomes(r)));
    }
    best = std::max(best, v);
  });
  return best;
}

double local_bound(const CorrelatorInequality& ineq, std::uint64_t cap) {
  ineq.validate();
  const auto& sc = ineq.scenario;
  double best = -std::numeric_limits<double>::infinity();
  for_each_deterministic(sc, cap, [&](const std::vector<std::vector<int>>& strat) {
    for (int j = 0; j < sc.parties(); ++j)
      if (!ineq.dummy.empty() && ineq.dummy[j] != kAbsent && strat[j][ineq.dummy[j]] != 0) return;
    double v = 0.0;
    for (const auto& t : ineq.terms) {
      int sign = 1;
      for (int j = 0; j < sc.parties(); ++j)
        if (t.settings[j] != kAbsent && strat[j][t.settings[j]] == 1) sign = -sign;
      v += t.coeff * sign;
    }
    best = std::max(best, v);
  });
  return best;
}

}  // namespace qgames
