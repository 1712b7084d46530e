#include "declearn/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace declearn {

using nlohmann::json;

json model_to_json(const ScoringModel& model) {
  json j;
  j["family"] =
      model.family == ModelFamily::SingletonLinear ? "singleton" : "pairwise";
  j["n"] = model.n;
  j["d"] = model.d;
  j["alphabet"] = model.alphabet;
  json edges = json::array();
  for (auto [u, v] : model.edges) edges.push_back({u + 1, v + 1});
  j["edges"] = edges;
  j["tied_edges"] = model.tied_edges;
  return j;
}

ScoringModel model_from_json(const json& j) {
  ScoringModel model;
  std::string family = j.at("family").get<std::string>();
  if (family == "singleton")
    model.family = ModelFamily::SingletonLinear;
  else if (family == "pairwise")
    model.family = ModelFamily::PairwiseNetwork;
  else
    throw IoError("unknown model family: " + family);
  model.n = j.at("n").get<int>();
  model.d = j.at("d").get<int>();
  model.alphabet = j.value("alphabet", 2);
  model.tied_edges = j.value("tied_edges", true);
  for (const auto& e : j.value("edges", json::array()))
    model.edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
  return model;
}

namespace {

std::string rel_name(Rel rel) {
  switch (rel) {
    case Rel::Le: return "<=";
    case Rel::Ge: return ">=";
    case Rel::Eq: return "=";
  }
  return "<=";
}

Rel rel_from_name(const std::string& name) {
  if (name == "<=") return Rel::Le;
  if (name == ">=") return Rel::Ge;
  if (name == "=") return Rel::Eq;
  throw IoError("unknown relation: " + name);
}

}  // namespace

json space_to_json(const OutputSpace& space) {
  json j;
  j["n"] = space.n();
  j["alphabet"] = space.alphabet();
  json linear = json::array();
  for (const auto& c : space.constraints().linear)
    linear.push_back({{"a", c.coeffs}, {"rel", rel_name(c.rel)}, {"b", c.bound}});
  j["linear"] = linear;
  json clauses = json::array();
  for (const auto& clause : space.constraints().clauses) {
    json lits = json::array();
    for (const auto& lit : clause)
      lits.push_back({{"var", lit.var + 1}, {"neg", lit.negated}});
    clauses.push_back(lits);
  }
  j["clauses"] = clauses;
  return j;
}

OutputSpace space_from_json(const json& j) {
  ConstraintSet cs;
  for (const auto& c : j.value("linear", json::array())) {
    LinearConstraint lc;
    lc.coeffs = c.at("a").get<std::vector<long>>();
    lc.rel = rel_from_name(c.at("rel").get<std::string>());
    lc.bound = c.at("b").get<long>();
    cs.linear.push_back(std::move(lc));
  }
  for (const auto& cl : j.value("clauses", json::array())) {
    Clause clause;
    for (const auto& lit : cl)
      clause.push_back(
          Literal{lit.at("var").get<int>() - 1, lit.value("neg", false)});
    cs.clauses.push_back(std::move(clause));
  }
  return OutputSpace(j.at("n").get<int>(), j.value("alphabet", 2),
                     std::move(cs));
}

json decomposition_to_json(const Decomposition& S) {
  json sets = json::array();
  for (const auto& s : S.sets) {
    json indices = json::array();
    for (int i : s) indices.push_back(i + 1);
    sets.push_back(indices);
  }
  return json{{"sets", sets}};
}

Decomposition decomposition_from_json(const json& j) {
  Decomposition S;
  for (const auto& s : j.at("sets")) {
    std::vector<int> indices;
    for (const auto& i : s) indices.push_back(i.get<int>() - 1);
    std::sort(indices.begin(), indices.end());
    S.sets.push_back(std::move(indices));
  }
  return S;
}

json weights_to_json(const WeightVector& w) { return json(w); }

WeightVector weights_from_json(const json& j) {
  return j.get<WeightVector>();
}

json report_to_json(const TrainReport& report) {
  json j;
  j["weights"] = report.weights;
  if (report.averaged) j["averaged"] = *report.averaged;
  j["decl_objective"] = report.decl_objective_trace;
  j["global_objective"] = report.global_objective_trace;
  j["epoch_seconds"] = report.epoch_seconds;
  j["train_seconds"] = report.train_seconds;
  j["updates"] = report.updates;
  j["epochs_run"] = report.epochs_run;
  return j;
}

json metrics_to_json(const Metrics& metrics) {
  return json{{"avg_hamming", metrics.avg_hamming},
              {"avg_f1", metrics.avg_f1},
              {"per_bit_error", metrics.per_bit_error},
              {"infeasible_predictions", metrics.infeasible_predictions}};
}

json verdict_to_json(const ExactnessVerdict& verdict) {
  json j;
  j["mode"] = verdict.mode;
  switch (verdict.outcome) {
    case ProbeOutcome::ExactCertified: j["outcome"] = "exact-certified"; break;
    case ProbeOutcome::NoCounterexample: j["outcome"] = "no-counterexample"; break;
    case ProbeOutcome::Counterexample: j["outcome"] = "counterexample"; break;
  }
  j["probes"] = verdict.probes;
  if (verdict.outcome == ProbeOutcome::Counterexample) {
    j["witness"] = verdict.witness;
    j["instance"] = verdict.instance + 1;
    j["violating_y"] = verdict.violating_y;
  }
  if (!verdict.uncovered.empty()) {
    json uncovered = json::array();
    for (const auto& [instance, y] : verdict.uncovered)
      uncovered.push_back({{"instance", instance + 1}, {"y", y}});
    j["uncovered"] = uncovered;
  }
  return j;
}

std::string dataset_to_jsonl(const Dataset& dataset) {
  std::ostringstream out;
  for (const auto& inst : dataset) {
    json rows = json::array();
    for (int i = 0; i < inst.x.rows; ++i) {
      json row = json::array();
      for (int jcol = 0; jcol < inst.x.cols; ++jcol)
        row.push_back(inst.x.at(i, jcol));
      rows.push_back(row);
    }
    out << json{{"x", rows}, {"y", inst.gold}}.dump() << "\n";
  }
  return out.str();
}

Dataset dataset_from_jsonl(const std::string& text) {
  Dataset dataset;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    Instance inst;
    const auto& rows = j.at("x");
    inst.x.rows = static_cast<int>(rows.size());
    inst.x.cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    for (const auto& row : rows)
      for (const auto& v : row) inst.x.data.push_back(v.get<double>());
    inst.gold = j.at("y").get<Assignment>();
    dataset.push_back(std::move(inst));
  }
  return dataset;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw IoError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace declearn
