#include "qgames/json_io.hpp"

#include <fstream>

namespace qgames {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index k = 0; k < m.cols(); ++k) row[static_cast<std::size_t>(k)] = m(i, k);
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXd vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ShapeError("ragged matrix in JSON");
    for (std::size_t k = 0; k < cols; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return m;
}

json provenance_json(const Provenance& p) {
  return {{"source", p.source}, {"affine", {{"scale", p.affine.scale}, {"shift", p.affine.shift}}}};
}

Provenance provenance_from(const json& j) {
  Provenance p;
  p.source = j.at("source").get<std::string>();
  p.affine.scale = j.at("affine").at("scale").get<double>();
  p.affine.shift = j.at("affine").at("shift").get<double>();
  return p;
}

void check_kind(const json& j, const char* kind) {
  if (!j.is_object()) throw ShapeError("expected a JSON object");
  if (j.value("schema_version", -1) != kSchemaVersion)
    throw ShapeError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  if (j.value("kind", std::string()) != kind) throw ShapeError(std::string("expected a '") + kind + "' document");
}

json game_body(const GameSpec& g) {
  return {{"questions", g.questions},
          {"answers", g.answers},
          {"question_dist", vector_json(g.question_dist)},
          {"acceptance", matrix_json(g.acceptance)},
          {"provenance", provenance_json(g.provenance)}};
}

GameSpec game_body_from(const json& j) {
  GameSpec g;
  g.questions = j.at("questions").get<std::vector<int>>();
  g.answers = j.at("answers").get<std::vector<int>>();
  g.question_dist = vector_from(j.at("question_dist"));
  g.acceptance = matrix_from(j.at("acceptance"));
  if (j.contains("provenance")) g.provenance = provenance_from(j.at("provenance"));
  g.validate();
  return g;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ShapeError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace

json to_json(const GameSpec& game) {
  json j = {{"schema_version", kSchemaVersion}, {"kind", "game"}};
  j.update(game_body(game));
  return j;
}

GameSpec game_from_json(const json& j) {
  check_kind(j, "game");
  return guarded([&] { return game_body_from(j); });
}

json to_json(const MultiRoundGameSpec& game) {
  json trials = json::array();
  for (const auto& t : game.trials) trials.push_back(game_body(t));
  return {{"schema_version", kSchemaVersion},
          {"kind", "multiround_game"},
          {"trials", trials},
          {"monomial_probs", game.monomial_probs},
          {"round_plans", game.round_plans},
          {"round_count_dist", vector_json(game.round_count_dist)},
          {"provenance", provenance_json(game.provenance)}};
}

MultiRoundGameSpec multiround_from_json(const json& j) {
  check_kind(j, "multiround_game");
  return guarded([&] {
    MultiRoundGameSpec g;
    for (const auto& t : j.at("trials")) g.trials.push_back(game_body_from(t));
    g.monomial_probs = j.at("monomial_probs").get<std::vector<double>>();
    g.round_plans = j.at("round_plans").get<std::vector<std::vector<int>>>();
    g.round_count_dist = vector_from(j.at("round_count_dist"));
    g.provenance = provenance_from(j.at("provenance"));
    return g;
  });
}

json to_json(const CcpSpec& ccp) {
  json channels = json::array();
  for (const auto& c : ccp.channels) channels.push_back({{"from", c.from}, {"to", c.to}, {"bits", c.bits}});
  json j = {{"schema_version", kSchemaVersion},
            {"kind", "ccp"},
            {"description", ccp.description},
            {"input_sizes", ccp.input_sizes},
            {"input_dist", vector_json(ccp.input_dist)},
            {"channels", channels},
            {"target", std::vector<int>(ccp.target.data(), ccp.target.data() + ccp.target.size())},
            {"base_settings", ccp.base_settings}};
  if (ccp.selector)
    j["selector"] = {{"p_g", ccp.selector->p_g}, {"p_h", ccp.selector->p_h}, {"prob_g", ccp.selector->prob_g}};
  else
    j["selector"] = nullptr;
  return j;
}

CcpSpec ccp_from_json(const json& j) {
  check_kind(j, "ccp");
  return guarded([&] {
    CcpSpec c;
    c.description = j.value("description", std::string());
    c.input_sizes = j.at("input_sizes").get<std::vector<int>>();
    c.input_dist = vector_from(j.at("input_dist"));
    for (const auto& ch : j.at("channels"))
      c.channels.push_back({ch.at("from").get<int>(), ch.at("to").get<int>(), ch.at("bits").get<int>()});
    const auto target = j.at("target").get<std::vector<int>>();
    c.target = Eigen::Map<const Eigen::VectorXi>(target.data(), static_cast<Eigen::Index>(target.size()));
    c.base_settings = j.at("base_settings").get<std::vector<int>>();
    if (!j.at("selector").is_null()) {
      const auto& s = j.at("selector");
      c.selector = UffinkSelector{s.at("p_g").get<double>(), s.at("p_h").get<double>(), s.at("prob_g").get<double>()};
    }
    c.validate();
    return c;
  });
}

json to_json(const ValueReport& r) {
  return {{"value", r.value},
          {"method", to_string(r.method)},
          {"std_error", r.std_error},
          {"iterations", r.iterations},
          {"certificate", r.certificate}};
}

json to_json(const BellScenario& sc) { return {{"settings", sc.settings()}, {"outcomes", sc.outcomes()}}; }

json to_json(const LinearInequality& ineq) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "linear_inequality"},
          {"scenario", to_json(ineq.scenario)},
          {"coeffs", matrix_json(ineq.coeffs)},
          {"bound", ineq.bound},
          {"normalized", ineq.normalized},
          {"affine", {{"scale", ineq.affine.scale}, {"shift", ineq.affine.shift}}}};
}

LinearInequality linear_from_json(const json& j) {
  check_kind(j, "linear_inequality");
  return guarded([&] {
    LinearInequality ineq;
    ineq.scenario = BellScenario(j.at("scenario").at("settings").get<std::vector<int>>(),
                                 j.at("scenario").at("outcomes").get<std::vector<int>>());
    ineq.coeffs = matrix_from(j.at("coeffs"));
    ineq.bound = j.at("bound").get<double>();
    ineq.normalized = j.at("normalized").get<bool>();
    ineq.affine = {j.at("affine").at("scale").get<double>(), j.at("affine").at("shift").get<double>()};
    ineq.validate();
    return ineq;
  });
}

json to_json(const CorrelatorInequality& ineq) {
  json terms = json::array();
  for (const auto& t : ineq.terms) terms.push_back({{"coeff", t.coeff}, {"settings", t.settings}});
  return {{"schema_version", kSchemaVersion},
          {"kind", "correlator_inequality"},
          {"scenario", to_json(ineq.scenario)},
          {"terms", terms},
          {"bound", ineq.bound},
          {"dummy", ineq.dummy}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON in '") + path + "': " + e.what());
  }
}

}  // namespace qgames
