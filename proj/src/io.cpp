#include "mtdhg/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mtdhg::io {

namespace {

const Json& Require(const Json& doc, const char* key) {
  if (!doc.is_object()) throw ShapeError("instance document must be a JSON object");
  const auto it = doc.find(key);
  if (it == doc.end()) throw ShapeError(std::string("missing key \"") + key + "\"");
  return *it;
}

double Number(const Json& value, const std::string& where) {
  if (!value.is_number()) throw ShapeError(where + " must be a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ShapeError(where + " must be finite");
  return v;
}

std::int64_t Integer(const Json& value, const std::string& where) {
  if (!value.is_number_integer()) throw ShapeError(where + " must be an integer");
  return value.get<std::int64_t>();
}

std::vector<double> NumberArray(const Json& value, const std::string& where) {
  if (!value.is_array()) throw ShapeError(where + " must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(Number(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> NumberTable(const Json& value, const std::string& where) {
  if (!value.is_array()) throw ShapeError(where + " must be an array of arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(NumberArray(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

RawInstance raw_instance_from_json(const Json& doc) {
  RawInstance raw;
  raw.num_targets = Integer(Require(doc, "K"), "K");
  raw.num_types = Integer(Require(doc, "n"), "n");
  raw.defender_budget = Number(Require(doc, "R_d"), "R_d");
  raw.attacker_budget = Number(Require(doc, "R_a"), "R_a");
  raw.true_type_index = Integer(Require(doc, "theta0"), "theta0");
  raw.type_probabilities = NumberArray(Require(doc, "P"), "P");
  raw.defender_covered_payoff = NumberArray(Require(doc, "U_d_c"), "U_d_c");
  raw.defender_uncovered_payoff = NumberArray(Require(doc, "U_d_u"), "U_d_u");
  raw.attacker_covered_payoff = NumberTable(Require(doc, "U_a_c"), "U_a_c");
  raw.attacker_uncovered_payoff = NumberTable(Require(doc, "U_a_u"), "U_a_u");
  return raw;
}

GameInstance instance_from_json(const Json& doc) {
  return validate_instance(raw_instance_from_json(doc));
}

Json instance_to_json(const GameInstance& game) {
  Json doc;
  doc["K"] = game.num_targets();
  doc["n"] = game.num_types();
  doc["R_d"] = game.defender_budget();
  doc["R_a"] = game.attacker_budget();
  doc["theta0"] = game.true_type_index();
  doc["P"] = vector_to_json(game.type_probabilities());
  doc["U_d_c"] = vector_to_json(game.defender_covered_payoff());
  doc["U_d_u"] = vector_to_json(game.defender_uncovered_payoff());
  doc["U_a_c"] = matrix_to_json(game.attacker_covered_payoff());
  doc["U_a_u"] = matrix_to_json(game.attacker_uncovered_payoff());
  return doc;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ShapeError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str());
}

GameInstance read_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

Vector read_defender_allocation(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  const Json& array = doc.is_object() ? Require(doc, "x") : doc;
  const std::vector<double> values = NumberArray(array, "x");
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

Json set_to_json(const TargetSet& s) {
  Json out = Json::array();
  for (Index k : s) out.push_back(k);
  return out;
}

Json result_to_json(const std::string& kind, const EquilibriumResult& result) {
  Json doc;
  doc["kind"] = kind;
  doc["x"] = vector_to_json(result.defender_strategy.allocation());
  doc["y"] = matrix_to_json(result.attacker_policy.allocation());
  doc["eu_d"] = result.defender_expected_utility;
  doc["attacker_values"] = vector_to_json(result.attacker_values);
  Json supports;
  supports["defender"] = set_to_json(result.defender_support);
  supports["attacker"] = Json::array();
  for (const auto& s : result.attacker_supports) supports["attacker"].push_back(set_to_json(s));
  doc["supports"] = supports;
  Json diagnostics;
  diagnostics["lp_calls"] = result.diagnostics.lp_calls;
  diagnostics["pruned"] = result.diagnostics.pruned;
  diagnostics["supports_examined"] = result.diagnostics.supports_examined;
  diagnostics["wall_seconds"] = result.diagnostics.wall_seconds;
  doc["diagnostics"] = diagnostics;
  return doc;
}

Json verification_to_json(const VerificationReport& report) {
  Json doc;
  doc["passed"] = report.passed();
  doc["epsilon"] = report.epsilon;
  doc["attacker_regret"] = vector_to_json(report.attacker_regret);
  doc["defender_regret"] = report.defender_regret;
  Json flags = Json::array();
  for (bool ok : report.is_attacker_best_response) flags.push_back(ok);
  doc["is_attacker_best_response"] = flags;
  return doc;
}

Json stability_to_json(const StabilityReport& report) {
  Json doc;
  doc["method"] = to_string(report.method);
  if (report.method == StabilityMethod::kBernoulliRank) {
    doc["rank"] = report.rank;
    doc["rank_threshold"] = report.rank_threshold;
    doc["rank_condition_holds"] = report.rank_condition_holds;
    return doc;
  }
  doc["sol_nonempty"] = report.sol_nonempty;
  if (report.witness_y_prime) {
    doc["witness_y_prime"] = matrix_to_json(report.witness_y_prime->allocation());
    doc["witness_lambda"] = report.witness_lambda;
  }
  return doc;
}

Json robustness_to_json(const RobustnessReport& report) {
  Json doc;
  doc["is_robust"] = report.is_robust;
  doc["perturbation_l1"] = report.perturbation_l1;
  doc["tie_tol"] = report.tie_tol;
  if (report.witness_policy) {
    doc["witness_policy"] = matrix_to_json(report.witness_policy->allocation());
  }
  doc["notes"] = report.notes;
  return doc;
}

Json radius_to_json(const RadiusEstimate& estimate) {
  Json doc;
  doc["radius"] = estimate.radius;
  doc["direction_samples"] = estimate.direction_samples;
  doc["directions_evaluated"] = estimate.directions_evaluated;
  doc["bisection_tolerance"] = estimate.bisection_tolerance;
  doc["max_reachable"] = estimate.max_reachable;
  doc["robustness_checks"] = estimate.robustness_checks;
  return doc;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + temp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + temp.string());
  }
  std::filesystem::rename(temp, path, ec);
  if (ec) throw IoError("cannot rename " + temp.string() + ": " + ec.message());
}

}  // namespace mtdhg::io
