#include "qgames/inequality_io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <type_traits>
#include <vector>

namespace qgames {

InequalityFamily parse_family(const std::string& name) {
  if (name == "linear") return InequalityFamily::linear;
  if (name == "correlator") return InequalityFamily::correlator;
  if (name == "quadratic") return InequalityFamily::quadratic;
  if (name == "polynomial") return InequalityFamily::polynomial;
  throw DomainError("unknown inequality family '" + name + "'");
}

std::string to_string(InequalityFamily family) {
  switch (family) {
    case InequalityFamily::linear: return "linear";
    case InequalityFamily::correlator: return "correlator";
    case InequalityFamily::quadratic: return "quadratic";
    case InequalityFamily::polynomial: return "polynomial";
  }
  return "?";
}

InequalityFamily family_of(const AnyInequality& ineq) { return static_cast<InequalityFamily>(ineq.index()); }

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

double to_double(const Line& line, const std::string& tok) {
  const char* begin = tok.data();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty() || errno == ERANGE || !std::isfinite(v))
    throw ParseError(line.number, "expected a number, got '" + tok + "'");
  return v;
}

int to_int(const Line& line, const std::string& tok) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) throw ParseError(line.number, "expected an integer, got '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

/// "0,1,_" -> {0, 1, kAbsent}; `_` only when allowed.
std::vector<int> read_tuple(const Line& line, const std::string& tok, const std::vector<int>& limits, bool allow_absent,
                            const char* what) {
  const auto parts = split(tok, ',');
  if (parts.size() != limits.size())
    throw ParseError(line.number, std::string(what) + " tuple '" + tok + "' has " + std::to_string(parts.size()) +
                                      " entries, expected " + std::to_string(limits.size()));
  std::vector<int> out;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (parts[j] == "_") {
      if (!allow_absent) throw ParseError(line.number, std::string("absent party '_' not allowed in ") + what + " tuple");
      out.push_back(kAbsent);
      continue;
    }
    const int v = to_int(line, parts[j]);
    if (v < 0 || v >= limits[j])
      throw ParseError(line.number, std::string(what) + " " + std::to_string(v) + " of party " + std::to_string(j) +
                                        " out of range [0, " + std::to_string(limits[j]) + ")");
    out.push_back(v);
  }
  return out;
}

void expect_arity(const Line& line, std::size_t n) {
  if (line.tokens.size() != n)
    throw ParseError(line.number, "'" + line.tokens[0] + "' line expects " + std::to_string(n - 1) + " field(s), got " +
                                      std::to_string(line.tokens.size() - 1));
}

struct Header {
  std::optional<InequalityFamily> family;
  std::optional<int> parties;
  std::optional<std::vector<int>> settings, outcomes;
  std::optional<double> bound;
  std::optional<int> support;
  std::optional<int> terms, indices, monomials;
  std::size_t terms_line = 0, indices_line = 0, monomials_line = 0;
};

class Reader {
 public:
  explicit Reader(std::vector<Line> lines) : lines_(std::move(lines)) {}

  AnyInequality run() {
    std::size_t pos = 0;
    for (; pos < lines_.size(); ++pos)
      if (!header_line(lines_[pos])) break;
    const std::size_t first_body = pos < lines_.size() ? lines_[pos].number : last_line();
    if (!h_.family) throw ParseError(first_body, "missing 'family' header");
    if (!h_.settings) throw ParseError(first_body, "missing 'settings' header");
    if (!h_.outcomes) throw ParseError(first_body, "missing 'outcomes' header");
    if (!h_.bound) throw ParseError(first_body, "missing 'bound' header");
    if (h_.settings->size() != h_.outcomes->size())
      throw ParseError(first_body, "'settings' and 'outcomes' list different numbers of parties");
    if (h_.parties && *h_.parties != static_cast<int>(h_.settings->size()))
      throw ParseError(first_body, "'parties' disagrees with the settings list");
    BellScenario sc;
    try {
      sc = BellScenario(*h_.settings, *h_.outcomes);
    } catch (const Error& e) {
      throw ParseError(first_body, e.what());
    }
    std::vector<Line> body(lines_.begin() + static_cast<std::ptrdiff_t>(pos), lines_.end());
    switch (*h_.family) {
      case InequalityFamily::linear: return linear(sc, body);
      case InequalityFamily::correlator: return correlator(sc, body);
      case InequalityFamily::quadratic: return quadratic(sc, body);
      case InequalityFamily::polynomial: return polynomial(sc, body);
    }
    throw ParseError(first_body, "unreachable");
  }

 private:
  std::size_t last_line() const { return lines_.empty() ? 1 : lines_.back().number; }

  std::vector<int> int_list(const Line& line) {
    if (line.tokens.size() < 2) throw ParseError(line.number, "'" + line.tokens[0] + "' needs at least one value");
    std::vector<int> out;
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
      const int v = to_int(line, line.tokens[i]);
      if (v < 1) throw ParseError(line.number, "'" + line.tokens[0] + "' values must be positive");
      out.push_back(v);
    }
    return out;
  }

  int count(const Line& line) {
    expect_arity(line, 2);
    const int v = to_int(line, line.tokens[1]);
    if (v < 0) throw ParseError(line.number, "'" + line.tokens[0] + "' must be nonnegative");
    return v;
  }

  template <typename T>
  void set_once(std::optional<T>& slot, T value, const Line& line) {
    if (slot) throw ParseError(line.number, "duplicate '" + line.tokens[0] + "' header");
    slot = std::move(value);
  }

  bool header_line(const Line& line) {
    const auto& key = line.tokens[0];
    if (key == "family") {
      expect_arity(line, 2);
      try {
        set_once(h_.family, parse_family(line.tokens[1]), line);
      } catch (const DomainError& e) {
        throw ParseError(line.number, e.what());
      }
    } else if (key == "parties") {
      set_once(h_.parties, count(line), line);
    } else if (key == "settings") {
      set_once(h_.settings, int_list(line), line);
    } else if (key == "outcomes") {
      set_once(h_.outcomes, int_list(line), line);
    } else if (key == "bound") {
      expect_arity(line, 2);
      set_once(h_.bound, to_double(line, line.tokens[1]), line);
    } else if (key == "support") {
      set_once(h_.support, count(line), line);
    } else if (key == "terms") {
      set_once(h_.terms, count(line), line);
      h_.terms_line = line.number;
    } else if (key == "indices") {
      set_once(h_.indices, count(line), line);
      h_.indices_line = line.number;
    } else if (key == "monomials") {
      set_once(h_.monomials, count(line), line);
      h_.monomials_line = line.number;
    } else {
      return false;
    }
    return true;
  }

  void check_count(const std::optional<int>& declared, std::size_t declared_line, std::size_t found, const char* what) {
    if (!declared) throw ParseError(last_line(), std::string("missing '") + what + "' header");
    if (static_cast<std::size_t>(*declared) != found)
      throw ParseError(declared_line, std::string("declared ") + std::to_string(*declared) + " " + what + ", found " +
                                          std::to_string(found));
  }

  template <typename T>
  T validated(T ineq) {
    try {
      ineq.validate();
    } catch (const Error& e) {
      throw ParseError(last_line(), e.what());
    }
    return ineq;
  }

  LinearInequality linear(const BellScenario& sc, const std::vector<Line>& body) {
    LinearInequality ineq;
    ineq.scenario = sc;
    ineq.coeffs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sc.setting_tuples()),
                                        static_cast<Eigen::Index>(sc.outcome_tuples()));
    ineq.bound = *h_.bound;
    for (const auto& line : body) {
      expect_term(line, 3);
      const double c = to_double(line, line.tokens[0]);
      const auto s = read_tuple(line, line.tokens[1], sc.settings(), false, "setting");
      const auto r = read_tuple(line, line.tokens[2], sc.outcomes(), false, "outcome");
      ineq.coeffs(static_cast<Eigen::Index>(sc.encode_settings(s)), static_cast<Eigen::Index>(sc.encode_outcomes(r))) += c;
    }
    check_count(h_.terms, h_.terms_line, body.size(), "terms");
    return validated(std::move(ineq));
  }

  CorrelatorInequality correlator(const BellScenario& sc, const std::vector<Line>& body) {
    CorrelatorInequality ineq;
    ineq.scenario = sc;
    ineq.bound = *h_.bound;
    for (const auto& line : body) {
      expect_term(line, 2);
      CorrelatorTerm t;
      t.coeff = to_double(line, line.tokens[0]);
      t.settings = read_tuple(line, line.tokens[1], sc.settings(), true, "setting");
      ineq.terms.push_back(std::move(t));
    }
    check_count(h_.terms, h_.terms_line, body.size(), "terms");
    return validated(std::move(ineq));
  }

  QuadraticInequality quadratic(const BellScenario& sc, const std::vector<Line>& body) {
    QuadraticInequality ineq;
    ineq.scenario = sc;
    ineq.bound = *h_.bound;
    ineq.g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sc.setting_tuples()));
    ineq.h = ineq.g;
    if (!h_.support) throw ParseError(body.empty() ? last_line() : body.front().number, "missing 'support' header");
    ineq.support = *h_.support;
    for (const auto& line : body) {
      if (line.tokens[0] != "g" && line.tokens[0] != "h")
        throw ParseError(line.number, "quadratic term lines start with 'g' or 'h', got '" + line.tokens[0] + "'");
      expect_arity(line, 3);
      const double c = to_double(line, line.tokens[1]);
      if (c != -1.0 && c != 0.0 && c != 1.0) throw ParseError(line.number, "quadratic coefficients must be -1, 0 or 1");
      const auto s = read_tuple(line, line.tokens[2], sc.settings(), false, "setting");
      auto& vec = line.tokens[0] == "g" ? ineq.g : ineq.h;
      const auto idx = static_cast<Eigen::Index>(sc.encode_settings(s));
      if (vec(idx) != 0.0) throw ParseError(line.number, "duplicate " + line.tokens[0] + " coefficient for " + line.tokens[2]);
      vec(idx) = c;
    }
    check_count(h_.terms, h_.terms_line, body.size(), "terms");
    return validated(std::move(ineq));
  }

  PolynomialInequality polynomial(const BellScenario& sc, const std::vector<Line>& body) {
    PolynomialInequality ineq;
    ineq.scenario = sc;
    ineq.bound = *h_.bound;
    if (!h_.indices) throw ParseError(body.empty() ? last_line() : body.front().number, "missing 'indices' header");
    std::vector<std::optional<EventIndex>> events(static_cast<std::size_t>(*h_.indices));
    std::size_t index_lines = 0;
    for (const auto& line : body) {
      if (line.tokens[0] == "monomials") {
        header_line(line);
      } else if (line.tokens[0] == "index") {
        expect_arity(line, 4);
        const int i = to_int(line, line.tokens[1]);
        if (i < 0 || i >= *h_.indices)
          throw ParseError(line.number, "event index " + std::to_string(i) + " out of range [0, " +
                                            std::to_string(*h_.indices) + ")");
        if (events[static_cast<std::size_t>(i)]) throw ParseError(line.number, "event index " + std::to_string(i) + " defined twice");
        EventIndex e;
        e.settings = read_tuple(line, line.tokens[2], sc.settings(), false, "setting");
        e.outcomes = read_tuple(line, line.tokens[3], sc.outcomes(), false, "outcome");
        events[static_cast<std::size_t>(i)] = std::move(e);
        ++index_lines;
      } else if (line.tokens[0] == "mono") {
        if (line.tokens.size() < 2) throw ParseError(line.number, "'mono' needs a coefficient");
        Monomial m;
        m.coeff = to_double(line, line.tokens[1]);
        m.exponents.assign(static_cast<std::size_t>(*h_.indices), 0);
        for (std::size_t k = 2; k < line.tokens.size(); ++k) {
          const auto parts = split(line.tokens[k], ':');
          if (parts.size() != 2) throw ParseError(line.number, "factor '" + line.tokens[k] + "' is not of the form i:k");
          const int i = to_int(line, parts[0]);
          const int power = to_int(line, parts[1]);
          if (i < 0 || i >= *h_.indices) throw ParseError(line.number, "factor refers to unknown event " + parts[0]);
          if (power < 1) throw ParseError(line.number, "exponents must be positive");
          m.exponents[static_cast<std::size_t>(i)] += power;
        }
        ineq.monomials.push_back(std::move(m));
      } else {
        throw ParseError(line.number, "polynomial lines start with 'index' or 'mono', got '" + line.tokens[0] + "'");
      }
    }
    check_count(h_.indices, h_.indices_line, index_lines, "indices");
    check_count(h_.monomials, h_.monomials_line, ineq.monomials.size(), "monomials");
    for (auto& e : events) ineq.events.push_back(std::move(*e));
    return validated(std::move(ineq));
  }

  void expect_term(const Line& line, std::size_t n) {
    if (line.tokens.size() != n)
      throw ParseError(line.number, "term line expects " + std::to_string(n) + " fields, got " +
                                        std::to_string(line.tokens.size()));
  }

  std::vector<Line> lines_;
  Header h_;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

std::string number(double v) {
  std::ostringstream ss;
  ss << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return ss.str();
}

std::string tuple(const std::vector<int>& t) {
  std::string s;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (j) s += ',';
    s += t[j] == kAbsent ? "_" : std::to_string(t[j]);
  }
  return s;
}

void write_header(std::ostream& out, InequalityFamily family, const BellScenario& sc, double bound) {
  out << "family " << to_string(family) << "\nparties " << sc.parties() << "\nsettings";
  for (int m : sc.settings()) out << ' ' << m;
  out << "\noutcomes";
  for (int d : sc.outcomes()) out << ' ' << d;
  out << "\nbound " << number(bound) << '\n';
}

}  // namespace

AnyInequality read_inequality(std::istream& in) { return Reader(tokenize(in)).run(); }

AnyInequality read_inequality_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return read_inequality(in);
}

void write_inequality(std::ostream& out, const AnyInequality& any) {
  std::visit(
      [&](const auto& ineq) {
        using T = std::decay_t<decltype(ineq)>;
        const auto& sc = ineq.scenario;
        if constexpr (std::is_same_v<T, LinearInequality>) {
          write_header(out, InequalityFamily::linear, sc, ineq.bound);
          std::vector<std::string> lines;
          for (Eigen::Index s = 0; s < ineq.coeffs.rows(); ++s)
            for (Eigen::Index r = 0; r < ineq.coeffs.cols(); ++r)
              if (ineq.coeffs(s, r) != 0.0)
                lines.push_back(number(ineq.coeffs(s, r)) + ' ' + tuple(sc.decode_settings(static_cast<std::size_t>(s))) + ' ' +
                                tuple(sc.decode_outcomes(static_cast<std::size_t>(r))));
          out << "terms " << lines.size() << '\n';
          for (const auto& l : lines) out << l << '\n';
        } else if constexpr (std::is_same_v<T, CorrelatorInequality>) {
          write_header(out, InequalityFamily::correlator, sc, ineq.bound);
          out << "terms " << ineq.terms.size() << '\n';
          for (const auto& t : ineq.terms) out << number(t.coeff) << ' ' << tuple(t.settings) << '\n';
        } else if constexpr (std::is_same_v<T, QuadraticInequality>) {
          write_header(out, InequalityFamily::quadratic, sc, ineq.bound);
          out << "support " << ineq.support << '\n';
          std::vector<std::string> lines;
          for (const char* name : {"g", "h"}) {
            const auto& vec = name[0] == 'g' ? ineq.g : ineq.h;
            for (Eigen::Index s = 0; s < vec.size(); ++s)
              if (vec(s) != 0.0)
                lines.push_back(std::string(name) + ' ' + number(vec(s)) + ' ' + tuple(sc.decode_settings(static_cast<std::size_t>(s))));
          }
          out << "terms " << lines.size() << '\n';
          for (const auto& l : lines) out << l << '\n';
        } else {
          write_header(out, InequalityFamily::polynomial, sc, ineq.bound);
          out << "indices " << ineq.events.size() << '\n';
          for (std::size_t i = 0; i < ineq.events.size(); ++i)
            out << "index " << i << ' ' << tuple(ineq.events[i].settings) << ' ' << tuple(ineq.events[i].outcomes) << '\n';
          out << "monomials " << ineq.monomials.size() << '\n';
          for (const auto& m : ineq.monomials) {
            out << "mono " << number(m.coeff);
            for (std::size_t i = 0; i < m.exponents.size(); ++i)
              if (m.exponents[i] > 0) out << ' ' << i << ':' << m.exponents[i];
            out << '\n';
          }
        }
      },
      any);
}

}  // namespace qgames
