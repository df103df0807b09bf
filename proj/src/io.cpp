#include "dynkin/io.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "dynkin/errors.hpp"

namespace dynkin::io {

namespace {

using InJson = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError(path + ": " + message, {path + ": " + message});
}

const InJson& member(const InJson& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "missing field");
  return *it;
}

long as_int(const InJson& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long>();
}

Rational as_rational(const InJson& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) fail(path, "decimal numbers are not accepted; write the value as a \"p/q\" string");
  if (!v.is_string()) fail(path, "expected a rational string \"p/q\"");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

std::vector<Node> parse_nodes(const InJson& tree_doc, const std::string& path) {
  const InJson& nodes = member(tree_doc, "nodes", path);
  if (!nodes.is_array()) fail(path + "/nodes", "expected an array");
  std::vector<Node> out;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::string p = path + "/nodes/" + std::to_string(k);
    const InJson& n = nodes[k];
    Node node;
    node.id = static_cast<NodeId>(as_int(member(n, "id", p), p + "/id"));
    node.time = static_cast<int>(as_int(member(n, "time", p), p + "/time"));
    const InJson& parent = member(n, "parent", p);
    if (!parent.is_null()) node.parent = static_cast<NodeId>(as_int(parent, p + "/parent"));
    node.prob = as_rational(member(n, "prob", p), p + "/prob");
    out.push_back(node);
  }
  return out;
}

AdaptedProcess parse_values(const InJson& values, const std::string& path, const ScenarioTree& tree) {
  if (!values.is_object()) fail(path, "expected an object mapping node ids to rationals");
  std::vector<std::optional<Rational>> slots(tree.size());
  for (const auto& [key, value] : values.items()) {
    const std::string p = path + "/" + key;
    NodeId id = kNoNode;
    try {
      std::size_t used = 0;
      id = static_cast<NodeId>(std::stol(key, &used));
      if (used != key.size()) id = kNoNode;
    } catch (const std::exception&) {
      id = kNoNode;
    }
    if (!tree.contains(id)) fail(p, "unknown node id \"" + key + "\"");
    slots[id] = as_rational(value, p);
  }
  std::vector<Rational> out;
  for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
    if (!slots[v]) fail(path, "missing value for node " + std::to_string(v));
    out.push_back(*slots[v]);
  }
  return AdaptedProcess(std::move(out));
}

Coalition parse_coalition(const InJson& c, const std::string& path, int num_players) {
  if (!c.is_array() || c.empty()) fail(path, "expected a non-empty array of players");
  std::vector<int> members;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const long p = as_int(c[k], path + "/" + std::to_string(k));
    if (p < 1 || p > num_players) fail(path, "player " + std::to_string(p) + " outside 1.." + std::to_string(num_players));
    members.push_back(static_cast<int>(p));
  }
  if (!std::is_sorted(members.begin(), members.end()) ||
      std::adjacent_find(members.begin(), members.end()) != members.end()) {
    fail(path, "coalition must be sorted without duplicates");
  }
  return Coalition::from_members(members, num_players);
}

Json stops_json(const StoppingRule& rule) {
  Json out = Json::array();
  for (const NodeId v : rule.stops()) out.push_back(v);
  return out;
}

Json rationals_json(const std::vector<Rational>& qs) {
  Json out = Json::array();
  for (const auto& q : qs) out.push_back(q.str());
  return out;
}

std::vector<Rational> rationals_from(const InJson& arr, const std::string& path) {
  if (!arr.is_array()) fail(path, "expected an array");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(as_rational(arr[k], path + "/" + std::to_string(k)));
  return out;
}

}  // namespace

GameDocument parse_document(std::string_view text, const ParseOptions& options) {
  InJson doc;
  try {
    doc = InJson::parse(text);
  } catch (const InJson::parse_error& e) {
    fail("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("", "expected a JSON object");

  std::string version = kSchemaVersion;
  if (doc.contains("schema_version")) {
    if (!doc["schema_version"].is_string()) fail("/schema_version", "expected a string");
    version = doc["schema_version"].get<std::string>();
    if (version != kSchemaVersion) fail("/schema_version", "unsupported schema version \"" + version + "\"");
  }
  std::string description;
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) fail("/description", "expected a string");
    description = doc["description"].get<std::string>();
  }

  const long players = as_int(member(doc, "players", ""), "/players");
  if (players < 2 || players > kMaxPlayers) fail("/players", "must be in 2.." + std::to_string(kMaxPlayers));
  const long horizon = as_int(member(doc, "horizon", ""), "/horizon");

  std::vector<Node> nodes = parse_nodes(member(doc, "tree", ""), "/tree");
  const auto tree_violations = validate_tree(nodes);
  if (!tree_violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : tree_violations) details.push_back("/tree/nodes: " + v.str());
    const std::string what = "/tree: invalid scenario tree (" + details.front() + ")";
    throw ValidationError(what, std::move(details));
  }
  ScenarioTree tree(std::move(nodes));
  if (tree.horizon() != horizon) {
    fail("/horizon", "declared " + std::to_string(horizon) + " but the tree has depth " + std::to_string(tree.horizon()));
  }

  GameSpec spec(static_cast<int>(players), std::move(tree));
  const int n = spec.num_players();
  std::set<std::pair<int, std::uint32_t>> seen;
  if (doc.contains("payoffs")) {
    const InJson& payoffs = doc["payoffs"];
    if (!payoffs.is_array()) fail("/payoffs", "expected an array");
    for (std::size_t k = 0; k < payoffs.size(); ++k) {
      const std::string p = "/payoffs/" + std::to_string(k);
      const long player = as_int(member(payoffs[k], "player", p), p + "/player");
      if (player < 1 || player > n) fail(p + "/player", "player outside 1.." + std::to_string(n));
      const Coalition c = parse_coalition(member(payoffs[k], "coalition", p), p + "/coalition", n);
      if (!seen.emplace(static_cast<int>(player), c.mask()).second) {
        fail(p, "duplicate payoff for player " + std::to_string(player) + ", coalition " + c.str());
      }
      spec.set_payoff(static_cast<int>(player), c, parse_values(member(payoffs[k], "values", p), p + "/values", spec.tree()));
    }
  }

  if (doc.contains("default_payoff")) {
    const InJson& raw = doc["default_payoff"];
    std::vector<std::pair<const InJson*, std::string>> entries;
    if (raw.is_array()) {
      for (std::size_t k = 0; k < raw.size(); ++k) entries.emplace_back(&raw[k], "/default_payoff/" + std::to_string(k));
    } else {
      entries.emplace_back(&raw, "/default_payoff");
    }
    // Player-specific defaults win over a general one.
    std::map<int, std::pair<AdaptedProcess, std::string>> specific;
    std::optional<AdaptedProcess> general;
    for (const auto& [entry, p] : entries) {
      if (entry->contains("coalition")) fail(p + "/coalition", "default_payoff must not name a coalition");
      AdaptedProcess values = parse_values(member(*entry, "values", p), p + "/values", spec.tree());
      if (entry->contains("player")) {
        const long player = as_int((*entry)["player"], p + "/player");
        if (player < 1 || player > n) fail(p + "/player", "player outside 1.." + std::to_string(n));
        if (!specific.emplace(static_cast<int>(player), std::make_pair(std::move(values), p)).second) {
          fail(p, "duplicate default_payoff for player " + std::to_string(player));
        }
      } else {
        if (general) fail(p, "more than one general default_payoff");
        general = std::move(values);
      }
    }
    for (int i = 1; i <= n; ++i) {
      const auto it = specific.find(i);
      const AdaptedProcess* fill = it != specific.end() ? &it->second.first : (general ? &*general : nullptr);
      if (fill == nullptr) continue;
      for (const Coalition c : all_coalitions(n)) {
        if (!spec.has_payoff(i, c)) spec.set_payoff(i, c, *fill);
      }
    }
  }

  const auto violations = validate_game(spec, options.enforce_assumption_a);
  if (!violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back("/payoffs: " + v.str());
    throw ValidationError("/payoffs: " + violations.front().str() +
                              (violations.size() > 1 ? " (and " + std::to_string(violations.size() - 1) + " more)" : ""),
                          std::move(details));
  }
  return GameDocument{version, std::move(description), std::move(spec)};
}

GameSpec parse_game(std::string_view text, const ParseOptions& options) {
  return std::move(parse_document(text, options).game);
}

Json game_to_json(const GameSpec& spec, const std::string& description) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  if (!description.empty()) doc["description"] = description;
  doc["players"] = spec.num_players();
  doc["horizon"] = spec.horizon();
  Json nodes = Json::array();
  for (const Node& node : spec.tree().nodes()) {
    Json n;
    n["id"] = node.id;
    n["time"] = node.time;
    n["parent"] = node.parent ? Json(*node.parent) : Json(nullptr);
    n["prob"] = node.prob.str();
    nodes.push_back(std::move(n));
  }
  doc["tree"]["nodes"] = std::move(nodes);
  Json payoffs = Json::array();
  for (int i = 1; i <= spec.num_players(); ++i) {
    for (const Coalition c : all_coalitions(spec.num_players())) {
      Json entry;
      entry["player"] = i;
      entry["coalition"] = c.members();
      Json values = Json::object();
      const AdaptedProcess& x = spec.payoff(i, c);
      for (NodeId v = 0; v < static_cast<NodeId>(x.size()); ++v) values[std::to_string(v)] = x[v].str();
      entry["values"] = std::move(values);
      payoffs.push_back(std::move(entry));
    }
  }
  doc["payoffs"] = std::move(payoffs);
  return doc;
}

std::string emit_game(const GameSpec& spec, const std::string& description) {
  return game_to_json(spec, description).dump(2) + "\n";
}

Json profile_to_json(const StrategyProfile& profile) {
  Json rules = Json::array();
  for (std::size_t k = 0; k < profile.rules.size(); ++k) {
    Json r;
    r["player"] = k + 1;
    r["stops"] = stops_json(profile.rules[k]);
    rules.push_back(std::move(r));
  }
  Json doc;
  doc["rules"] = std::move(rules);
  return doc;
}

StrategyProfile profile_from_json(const InJson& doc, const GameSpec& spec) {
  const InJson& rules = member(doc, "rules", "");
  if (!rules.is_array()) fail("/rules", "expected an array");
  std::vector<std::optional<StoppingRule>> slots(static_cast<std::size_t>(spec.num_players()));
  for (std::size_t k = 0; k < rules.size(); ++k) {
    const std::string p = "/rules/" + std::to_string(k);
    const long player = as_int(member(rules[k], "player", p), p + "/player");
    if (player < 1 || player > spec.num_players()) fail(p + "/player", "player outside 1.." + std::to_string(spec.num_players()));
    const InJson& stops = member(rules[k], "stops", p);
    if (!stops.is_array()) fail(p + "/stops", "expected an array of node ids");
    std::vector<NodeId> flags;
    for (std::size_t s = 0; s < stops.size(); ++s) {
      const long id = as_int(stops[s], p + "/stops/" + std::to_string(s));
      if (!spec.tree().contains(static_cast<NodeId>(id))) {
        fail(p + "/stops/" + std::to_string(s), "unknown node id " + std::to_string(id));
      }
      flags.push_back(static_cast<NodeId>(id));
    }
    if (slots[player - 1]) fail(p, "duplicate rule for player " + std::to_string(player));
    slots[player - 1] = canonicalize_rule(spec.tree(), flags);
  }
  StrategyProfile out;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (!slots[k]) fail("/rules", "missing rule for player " + std::to_string(k + 1));
    out.rules.push_back(*slots[k]);
  }
  return out;
}

StrategyProfile parse_profile(std::string_view text, const GameSpec& spec) {
  InJson doc;
  try {
    doc = InJson::parse(text);
  } catch (const InJson::parse_error& e) {
    fail("", std::string("malformed JSON: ") + e.what());
  }
  return profile_from_json(doc, spec);
}

Json certificate_to_json(const NepCertificate& cert) {
  Json doc;
  doc["epsilon"] = cert.epsilon.str();
  doc["achieved"] = rationals_json(cert.achieved);
  doc["best_response"] = rationals_json(cert.best_response);
  doc["gains"] = rationals_json(cert.gains);
  doc["is_eps_nep"] = cert.is_eps_nep;
  return doc;
}

NepCertificate certificate_from_json(const InJson& doc) {
  NepCertificate cert;
  cert.epsilon = as_rational(member(doc, "epsilon", ""), "/epsilon");
  cert.achieved = rationals_from(member(doc, "achieved", ""), "/achieved");
  cert.best_response = rationals_from(member(doc, "best_response", ""), "/best_response");
  cert.gains = rationals_from(member(doc, "gains", ""), "/gains");
  const InJson& flag = member(doc, "is_eps_nep", "");
  if (!flag.is_boolean()) fail("/is_eps_nep", "expected a boolean");
  cert.is_eps_nep = flag.get<bool>();
  return cert;
}

Json trace_to_json(const std::vector<SchemeStep>& trace) {
  Json out = Json::array();
  for (const SchemeStep& s : trace) {
    Json step;
    step["n"] = s.n;
    step["player"] = s.player;
    step["theta_stops"] = stops_json(s.theta);
    Json coalitions = Json::object();
    for (const auto& [node, c] : s.coalition_at_theta) coalitions[std::to_string(node)] = c.members();
    step["coalitions"] = std::move(coalitions);
    step["mu_stops"] = stops_json(s.mu);
    step["tau_stops"] = stops_json(s.tau);
    out.push_back(std::move(step));
  }
  return out;
}

RunReport make_report(const GameSpec& spec, const EquilibriumProfile& eq, const Rational& certify_epsilon) {
  RunReport report;
  report.order = eq.order;
  report.epsilon = eq.epsilon;
  report.init = eq.init;
  report.uncapped = eq.uncapped;
  report.capped = eq.capped;
  for (const NodeId leaf : spec.tree().leaves()) report.outcomes.push_back(realized_outcome(spec, eq.capped, leaf));
  report.expected_payoffs = expected_payoffs(spec, eq.capped);
  report.expected_payoffs_uncapped = expected_payoffs(spec, eq.uncapped);
  report.certificate = certify(spec, eq.capped, certify_epsilon);
  report.rounds_used = eq.rounds_used;
  report.trace = eq.trace;
  return report;
}

Json report_to_json(const GameSpec& spec, const RunReport& report, bool include_trace) {
  Json doc;
  doc["order"] = report.order;
  doc["epsilon"] = report.epsilon.str();
  doc["initialization"] = report.init == Initialization::kNever ? "never" : "horizon";
  doc["rounds_used"] = report.rounds_used;
  doc["uncapped"] = profile_to_json(report.uncapped);
  doc["capped"] = profile_to_json(report.capped);
  Json paths = Json::array();
  const auto leaves = spec.tree().leaves();
  std::vector<std::vector<Stage>> stages;
  for (const auto& r : report.capped.rules) stages.push_back(path_values(spec.tree(), r));
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    Json path;
    path["leaf"] = leaves[k];
    Json per_player = Json::array();
    for (const auto& s : stages) per_player.push_back(s[k].str());
    path["stages"] = std::move(per_player);
    path["stop_stage"] = report.outcomes[k].stage.str();
    path["coalition"] = report.outcomes[k].coalition.members();
    paths.push_back(std::move(path));
  }
  doc["paths"] = std::move(paths);
  doc["expected_payoffs"] = rationals_json(report.expected_payoffs);
  doc["expected_payoffs_uncapped"] = rationals_json(report.expected_payoffs_uncapped);
  doc["certificate"] = certificate_to_json(report.certificate);
  if (include_trace) doc["trace"] = trace_to_json(report.trace);
  return doc;
}

}  // namespace dynkin::io
