#pragma once

// JSON documents: games, strategy profiles, certificates, traces and solve
// reports. Every rational is written as a "p/q" (or integer) string.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dynkin/game.hpp"
#include "dynkin/scheme.hpp"
#include "dynkin/verify.hpp"

namespace dynkin::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

struct GameDocument {
  std::string schema_version = kSchemaVersion;
  std::string description;
  GameSpec game;
};

struct ParseOptions {
  bool enforce_assumption_a = false;
};

// Parses and validates (tree, payoff totality, terminal coincidence, and the
// pairwise assumption when requested). default_payoff entries are expanded
// before validation. Throws ValidationError whose message and details carry
// JSON-pointer style paths into the document.
GameDocument parse_document(std::string_view text, const ParseOptions& options = {});
GameSpec parse_game(std::string_view text, const ParseOptions& options = {});

// Canonical form: payoffs fully expanded, players ascending, coalitions in
// all_coalitions order, node values keyed by id ascending.
Json game_to_json(const GameSpec& spec, const std::string& description = {});
std::string emit_game(const GameSpec& spec, const std::string& description = {});

Json profile_to_json(const StrategyProfile& profile);
// {"rules":[{"player":1,"stops":[...]}]}; empty stops mean NEVER. Throws
// ValidationError on unknown nodes, missing or duplicate players.
StrategyProfile parse_profile(std::string_view text, const GameSpec& spec);
StrategyProfile profile_from_json(const nlohmann::json& doc, const GameSpec& spec);

Json certificate_to_json(const NepCertificate& cert);
NepCertificate certificate_from_json(const nlohmann::json& doc);

Json trace_to_json(const std::vector<SchemeStep>& trace);

struct RunReport {
  std::vector<int> order;
  Rational epsilon;
  Initialization init = Initialization::kNever;
  StrategyProfile uncapped;
  StrategyProfile capped;
  std::vector<Outcome> outcomes;  // per leaf of the capped profile
  std::vector<Rational> expected_payoffs;
  std::vector<Rational> expected_payoffs_uncapped;
  NepCertificate certificate;
  int rounds_used = 0;
  std::vector<SchemeStep> trace;
};

RunReport make_report(const GameSpec& spec, const EquilibriumProfile& eq, const Rational& certify_epsilon);
Json report_to_json(const GameSpec& spec, const RunReport& report, bool include_trace);

}  // namespace dynkin::io
