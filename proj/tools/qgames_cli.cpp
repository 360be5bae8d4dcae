// qgames: command-line front end. Every subcommand writes one JSON document
// (or a CSV view of its rows) to stdout or --out.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgames/circle_game.hpp"
#include "qgames/game_compiler.hpp"
#include "qgames/inequality_io.hpp"
#include "qgames/json_io.hpp"
#include "qgames/tvshow.hpp"

using nlohmann::json;
using namespace qgames;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSize = 3;
constexpr int kExitNumeric = 4;

struct Globals {
  unsigned threads = 0;
  std::uint64_t cap = SolverConfig{}.enumeration_cap;
  std::string format = "json";
  std::string out;
  long pivot_limit = kDefaultPivotLimit;

  SolverConfig solver() const { return {cap, threads, pivot_limit}; }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<double> parse_sweep(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ':');) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad sweep '" + spec + "': expected start:stop:step");
    }
  }
  if (parts.size() != 3) throw UsageError("bad sweep '" + spec + "': expected start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start) throw UsageError("bad sweep '" + spec + "': need step > 0 and stop >= start");
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw UsageError("sweep '" + spec + "' has too many points");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::string fnv_digest(const json& j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void emit(const Globals& g, const std::string& command, const json& rows, const std::vector<std::string>& columns,
          json extra = json::object()) {
  std::ostringstream os;
  if (g.format == "csv") {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_cell(row.value(columns[i], json()));
      os << '\n';
    }
  } else {
    json doc = {{"schema_version", kSchemaVersion}, {"command", command}, {"rows", rows}};
    doc.update(extra);
    os << dump(doc);
  }
  if (g.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + g.out + "'");
    f << os.str();
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const char* what) {
  if (!seed) throw UsageError(std::string("--seed is required for ") + what);
  return *seed;
}

// ---- circle ---------------------------------------------------------------

struct CircleArgs {
  std::optional<double> eta;
  std::string sweep;
  bool optimize = false;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> seed;
};

void run_circle(const Globals& g, const CircleArgs& a) {
  const int modes = (a.eta ? 1 : 0) + (a.sweep.empty() ? 0 : 1) + (a.optimize ? 1 : 0);
  if (modes != 1) throw UsageError("circle needs exactly one of --eta, --sweep, --optimize");
  if (a.optimize) {
    const auto opt = circle::optimize_delta_p(1e-10);
    const json row = {{"eta_star", opt.eta},
                      {"delta_p_star", opt.delta},
                      {"p_classical", circle::classical_success(opt.eta)},
                      {"p_quantum", circle::quantum_success(opt.eta)}};
    emit(g, "circle", json::array({row}), {"eta_star", "delta_p_star", "p_classical", "p_quantum"});
    return;
  }
  const auto etas = a.eta ? std::vector<double>{*a.eta} : parse_sweep(a.sweep);
  if (a.n > 0) require_seed(a.seed, "Monte Carlo runs");
  json rows = json::array();
  for (std::size_t i = 0; i < etas.size(); ++i) {
    double eta = etas[i];
    // Four-decimal inputs of pi/2 land just above the domain edge.
    if (eta > circle::kTwoPi / 4.0 && eta <= circle::kTwoPi / 4.0 + 1e-4) eta = circle::kTwoPi / 4.0;
    if (!(eta > 0.0 && eta <= circle::kTwoPi / 4.0)) throw UsageError("eta " + std::to_string(etas[i]) + " outside (0, pi/2]");
    const circle::CircleGameParams params(eta);
    json row = {{"eta", etas[i]},
                {"eta_used", eta},
                {"p_classical", circle::classical_success(eta)},
                {"p_quantum", circle::quantum_success(eta)},
                {"delta_p", circle::delta_p(eta)},
                {"n", a.n},
                {"seed", a.seed ? json(*a.seed) : json()}};
    if (a.n > 0) {
      // One stream per row and protocol so rows do not depend on sweep length.
      const auto c = circle::simulate_classical(params, circle::ArcPartitionStrategy::half_circle(), a.n,
                                                derive_seed(*a.seed, 2 * i), g.threads);
      const auto q = circle::simulate_quantum(params, a.n, derive_seed(*a.seed, 2 * i + 1), g.threads);
      row["estimate_classical"] = c.value;
      row["stderr_classical"] = c.std_error;
      row["estimate_quantum"] = q.value;
      row["stderr_quantum"] = q.std_error;
    }
    rows.push_back(row);
  }
  emit(g, "circle", rows,
       {"eta", "p_classical", "p_quantum", "delta_p", "estimate_classical", "stderr_classical", "estimate_quantum",
        "stderr_quantum", "n", "seed"});
}

// ---- tvshow ---------------------------------------------------------------

struct TvArgs {
  std::optional<double> p;
  std::string sweep;
  int private_restarts = 0;
  std::optional<std::uint64_t> seed;
};

json class_entry(const char* name, double p, const ValueReport& r, std::optional<double> bound = std::nullopt) {
  return {{"class", name},
          {"p", p},
          {"value", r.value},
          {"bound", bound ? json(*bound) : json()},
          {"method", to_string(r.method)},
          {"certificate_digest", fnv_digest(r.certificate)},
          {"certificate", r.certificate}};
}

void run_tvshow(const Globals& g, const TvArgs& a) {
  if ((a.p ? 1 : 0) + (a.sweep.empty() ? 0 : 1) != 1) throw UsageError("tvshow needs exactly one of --p, --sweep");
  auto ps = a.p ? std::vector<double>{*a.p} : parse_sweep(a.sweep);
  for (auto& p : ps) {
    if (p > 1.0 && p < 1.0 + 1e-9) p = 1.0;  // accumulated sweep rounding
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p " + std::to_string(p) + " outside [0, 1]");
  }
  std::optional<ValueReport> priv;
  if (a.private_restarts > 0) priv = tvshow::private_randomness_estimate(a.private_restarts, require_seed(a.seed, "--private-restarts"));
  const auto cfg = g.solver();
  // D, R and C do not depend on p.
  const auto d = tvshow::deterministic_value(cfg);
  const auto r = tvshow::tv_value(tvshow::coin_on_bad_branch(), cfg);
  const auto c = tvshow::shared_value(cfg);
  json rows = json::array();
  for (double p : ps) {
    tvshow::TvStrategy qs;
    qs.resource = tvshow::ResourceClass::Q;
    qs.p = p;
    const auto q = tvshow::tv_value(qs, cfg);
    const auto n = tvshow::nhv_value(p, cfg);
    json classes = json::array({class_entry("D", p, d), class_entry("R", p, r), class_entry("Q", p, q),
                                class_entry("C", p, c), class_entry("N", p, n, tvshow::nhv_bound(p))});
    if (priv) classes.push_back(class_entry("R_private_estimate", p, *priv));
    rows.push_back({{"p", p},
                    {"D", d.value},
                    {"R", r.value},
                    {"Q", q.value},
                    {"C", c.value},
                    {"N_bound", tvshow::nhv_bound(p)},
                    {"N_lp", n.value},
                    {"classes", classes}});
  }
  emit(g, "tvshow", rows, {"p", "D", "R", "Q", "C", "N_bound", "N_lp"});
}

// ---- compile --------------------------------------------------------------

struct CompileArgs {
  std::string file;
  std::string family;
  std::string game_out;
  std::string point;
  std::optional<std::uint64_t> seed;
  int restarts = 20;
};

json affine_json(const AffineRecord& a) { return {{"scale", a.scale}, {"shift", a.shift}}; }

json quantum_column(const Globals& g, const GameSpec& game, const CompileArgs& a) {
  const auto sc = game.scenario();
  if (sc.parties() != 2 || !sc.binary()) return nullptr;
  OptimizerConfig opt;
  opt.restarts = a.restarts;
  opt.seed = a.seed.value_or(0);
  opt.threads = g.threads;
  return to_json(quantum_value_two_qubit(game, make_singlet<double>(), opt));
}

void run_compile(const Globals& g, const CompileArgs& a) {
  const auto any = read_inequality_file(a.file);
  if (!a.family.empty() && parse_family(a.family) != family_of(any))
    throw UsageError("--family " + a.family + " does not match the file's family " + to_string(family_of(any)));
  json row = {{"file", a.file}, {"family", to_string(family_of(any))}};
  json artifact;
  const auto cfg = g.solver();

  const auto compile_and_value = [&](const LinearInequality& lin, const std::string& source) {
    auto normalized = normalize_linear(lin);
    auto game = compile_linear(normalized);
    game.provenance.source = source;
    const auto classical = classical_value(game, cfg);
    row["affine"] = affine_json(normalized.affine);
    row["normalized_bound"] = normalized.bound;
    row["classical"] = to_json(classical);
    row["classical_original_scale"] = normalized.affine.invert(classical.value);
    row["quantum"] = quantum_column(g, game, a);
    if (!row["quantum"].is_null()) row["quantum_original_scale"] = normalized.affine.invert(row["quantum"]["value"].get<double>());
    artifact = to_json(game);
  };

  switch (family_of(any)) {
    case InequalityFamily::linear:
      compile_and_value(std::get<LinearInequality>(any), a.file);
      break;
    case InequalityFamily::correlator: {
      const auto& ineq = std::get<CorrelatorInequality>(any);
      const auto augmented = augment_sliwa(ineq);
      row["augmented"] = ineq.has_absent_slots();
      row["augmented_inequality"] = to_json(augmented);
      row["local_bound"] = local_bound(ineq, cfg.enumeration_cap);
      row["local_bound_augmented"] = local_bound(augmented, cfg.enumeration_cap);
      compile_and_value(expand_correlator(augmented), a.file);
      break;
    }
    case InequalityFamily::quadratic: {
      if (a.point.empty()) throw UsageError("quadratic inequalities need --point p1,p2");
      double p1 = 0.0, p2 = 0.0;
      char comma = 0;
      std::istringstream ss(a.point);
      if (!(ss >> p1 >> comma >> p2) || comma != ',' || !ss.eof()) throw UsageError("bad --point '" + a.point + "'");
      const auto ccp = compile_uffink(std::get<QuadraticInequality>(any), p1, p2);
      row["z_probability_g"] = ccp.selector->prob_g;
      row["point"] = {p1, p2};
      artifact = to_json(ccp);
      break;
    }
    case InequalityFamily::polynomial: {
      const auto normalized = normalize_polynomial(std::get<PolynomialInequality>(any));
      auto game = compile_polynomial(normalized);
      game.provenance.source = a.file;
      row["affine"] = affine_json(normalized.affine);
      row["normalized_bound"] = normalized.bound;
      row["trials"] = game.trials.size();
      artifact = to_json(game);
      break;
    }
  }
  json extra = json::object();
  if (a.game_out.empty()) {
    extra["artifact"] = artifact;
  } else {
    write_file(a.game_out, dump(artifact));
    row["artifact_path"] = a.game_out;
  }
  json flat = row;
  if (row.contains("classical")) flat["classical_value"] = row["classical"]["value"];
  if (row.contains("quantum") && !row["quantum"].is_null()) flat["quantum_value"] = row["quantum"]["value"];
  emit(g, "compile", json::array({flat}), {"file", "family", "classical_value", "quantum_value", "z_probability_g"}, extra);
}

// ---- ccp ------------------------------------------------------------------

struct CcpArgs {
  std::string fn = "fm";
  double p = 1.0;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> seed;
};

void run_ccp(const Globals& g, const CcpArgs& a) {
  tvshow::CcpFunction fn;
  try {
    fn = tvshow::parse_function(a.fn);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (!(a.p >= 0.0 && a.p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
  const auto classical = tvshow::ccp_classical_value(fn, g.solver());
  const auto quantum = tvshow::ccp_quantum_value(fn, a.p);
  json row = {{"function", tvshow::to_string(fn)},
              {"p", a.p},
              {"classical", classical.value},
              {"quantum", quantum.value},
              {"n", a.n},
              {"seed", a.seed ? json(*a.seed) : json()},
              {"classical_certificate", classical.certificate}};
  if (a.n > 0) {
    const auto mc = tvshow::ccp_quantum_simulate(fn, a.p, a.n, require_seed(a.seed, "Monte Carlo runs"), g.threads);
    row["estimate"] = mc.value;
    row["stderr"] = mc.std_error;
  }
  emit(g, "ccp", json::array({row}), {"function", "p", "classical", "quantum", "estimate", "stderr", "n", "seed"});
}

// ---- value ----------------------------------------------------------------

struct ValueArgs {
  std::string game;
  std::string method = "enumeration";
  std::optional<std::uint64_t> seed;
  int restarts = 20;
};

void run_value(const Globals& g, const ValueArgs& a) {
  const auto game = game_from_json(load_json_file(a.game));
  const auto cfg = g.solver();
  ValueReport rep;
  if (a.method == "enumeration") {
    rep = classical_value(game, cfg);
  } else if (a.method == "zero_sum") {
    rep = shared_randomness_value(game, true, cfg);
  } else if (a.method == "worst_case") {
    rep = worst_case_deterministic_value(game, cfg);
  } else if (a.method == "seesaw") {
    OptimizerConfig opt;
    opt.restarts = a.restarts;
    opt.seed = a.seed.value_or(0);
    opt.threads = g.threads;
    rep = quantum_value_two_qubit(game, make_singlet<double>(), opt);
  } else {
    throw UsageError("unknown --method " + a.method);
  }
  json row = to_json(rep);
  row["game"] = a.game;
  emit(g, "value", json::array({row}), {"game", "method", "value", "iterations"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell inequalities, nonlocal games and communication complexity"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (0: all cores)");
  app.add_option("--cap", g.cap, "Enumeration cap on deterministic strategies")->envname("QGAMES_ENUM_CAP");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Write results here instead of stdout");
  app.add_option("--lp-pivot-limit", g.pivot_limit, "Simplex pivot limit per LP")->check(CLI::PositiveNumber);

  CircleArgs circle_args;
  auto* circle_cmd = app.add_subcommand("circle", "Circle game: analytic values and Monte Carlo");
  circle_cmd->add_option("--eta", circle_args.eta, "Neighbourhood angle in (0, pi/2]");
  circle_cmd->add_option("--sweep", circle_args.sweep, "start:stop:step over eta");
  circle_cmd->add_flag("--optimize", circle_args.optimize, "Maximize the quantum advantage over eta");
  circle_cmd->add_option("--n", circle_args.n, "Monte Carlo samples per protocol (0: analytic only)");
  circle_cmd->add_option("--seed", circle_args.seed, "Master seed");

  TvArgs tv_args;
  auto* tv_cmd = app.add_subcommand("tvshow", "Adversarial TV-show resource table");
  tv_cmd->add_option("--p", tv_args.p, "Werner weight in [0, 1]");
  tv_cmd->add_option("--sweep", tv_args.sweep, "start:stop:step over p");
  tv_cmd->add_option("--private-restarts", tv_args.private_restarts, "Also estimate the private-randomness value");
  tv_cmd->add_option("--seed", tv_args.seed, "Seed for --private-restarts");

  CompileArgs compile_args;
  auto* compile_cmd = app.add_subcommand("compile", "Compile an inequality file into a game");
  compile_cmd->add_option("file", compile_args.file, "Inequality file")->required();
  compile_cmd->add_option("--family", compile_args.family, "Expected family")
      ->check(CLI::IsMember({"linear", "correlator", "quadratic", "polynomial"}));
  compile_cmd->add_option("--game-out", compile_args.game_out, "Write the compiled game JSON here");
  compile_cmd->add_option("--point", compile_args.point, "p1,p2 for quadratic inequalities");
  compile_cmd->add_option("--seed", compile_args.seed, "Seesaw seed (default 0)");
  compile_cmd->add_option("--restarts", compile_args.restarts, "Seesaw restarts")->check(CLI::PositiveNumber);

  CcpArgs ccp_args;
  auto* ccp_cmd = app.add_subcommand("ccp", "Communication complexity protocol values");
  ccp_cmd->add_option("--fn", ccp_args.fn, "f, fm or const");
  ccp_cmd->add_option("--p", ccp_args.p, "Werner weight in [0, 1]");
  ccp_cmd->add_option("--n", ccp_args.n, "Monte Carlo samples (0: analytic only)");
  ccp_cmd->add_option("--seed", ccp_args.seed, "Master seed");

  ValueArgs value_args;
  auto* value_cmd = app.add_subcommand("value", "Value of a game JSON file");
  value_cmd->add_option("--game", value_args.game, "Game JSON")->required();
  value_cmd->add_option("--method", value_args.method, "enumeration, zero_sum, worst_case or seesaw");
  value_cmd->add_option("--seed", value_args.seed, "Seesaw seed (default 0)");
  value_cmd->add_option("--restarts", value_args.restarts, "Seesaw restarts")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*circle_cmd) run_circle(g, circle_args);
    if (*tv_cmd) run_tvshow(g, tv_args);
    if (*compile_cmd) run_compile(g, compile_args);
    if (*ccp_cmd) run_ccp(g, ccp_args);
    if (*value_cmd) run_value(g, value_args);
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSize;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
