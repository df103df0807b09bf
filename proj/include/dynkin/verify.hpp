#pragma once

// Independent certification of candidate equilibria: exhaustive stopping-rule
// enumeration, best responses, ε-NEP certificates and trace invariant checks.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynkin/game.hpp"
#include "dynkin/scheme.hpp"
#include "dynkin/tree.hpp"

namespace dynkin {

inline constexpr std::uint64_t kDefaultRuleCap = 4096;
inline constexpr std::uint64_t kDefaultProfileCap = std::uint64_t{1} << 20;

// Number of canonical rules (antichains, including the empty NEVER rule),
// saturating at UINT64_MAX.
std::uint64_t count_rules(const ScenarioTree& tree);

// Every canonical rule. Throws CapExceededError if count_rules exceeds cap.
std::vector<StoppingRule> enumerate_rules(const ScenarioTree& tree, std::uint64_t cap = kDefaultRuleCap);

// Reward seen by player i deviating from the profile: X^{i,{i}} before the
// others' first stop R_i, X^{i,I∪{i}} at the R_i node (I = others stopping
// there), and X^{i,I} of that node afterwards. For every rule D,
// E[J_i(profile with D for i)] = expectation_under_rule(deviation_reward, D).
AdaptedProcess deviation_reward(const GameSpec& spec, const StrategyProfile& profile, int player);

struct BestResponse {
  Rational value;
  StoppingRule rule;                  // an optimal deviation
  std::optional<Rational> enumerated;  // set when the enumeration cross-check ran
};

// sup over deviations via the Snell envelope of the deviation reward. When the
// rule count is at most enumeration_cap, the supremum is recomputed by
// brute force over expected_payoffs and a mismatch throws std::logic_error.
BestResponse best_response_value(const GameSpec& spec, const StrategyProfile& profile, int player,
                                 std::uint64_t enumeration_cap = kDefaultRuleCap);

struct NepCertificate {
  Rational epsilon;
  std::vector<Rational> achieved;
  std::vector<Rational> best_response;
  std::vector<Rational> gains;
  bool is_eps_nep = false;

  friend bool operator==(const NepCertificate&, const NepCertificate&) = default;
};

NepCertificate certify(const GameSpec& spec, const StrategyProfile& profile, const Rational& epsilon,
                       std::uint64_t enumeration_cap = 0);

// Every profile in the Cartesian product of canonical rules whose certificate
// passes at epsilon. Throws CapExceededError past either cap.
std::vector<std::pair<StrategyProfile, NepCertificate>> find_all_eps_neps(
    const GameSpec& spec, const Rational& epsilon, std::uint64_t rule_cap = kDefaultRuleCap,
    std::uint64_t profile_cap = kDefaultProfileCap);

struct TraceViolation {
  std::string invariant;
  int step = 0;
  NodeId leaf = kNoNode;
  std::string detail;

  std::string str() const;
};

// Checks, pathwise over every leaf: τ_n ≤ τ_{n-N}, θ_n ≤ θ_{n-N},
// μ_n ≤ μ_{n-N}; μ_n = τ_n ∧ θ_n; μ_{n+N} ≤ τ_n; no τ_n = θ_n before the
// limit; μ_n = μ_{n+N} ⇒ τ_n = τ_{n+N}; a single player at R*; and the round
// bound. The "limit" is NEVER, or T for runs initialised at the horizon.
std::vector<TraceViolation> check_trace_invariants(const ScenarioTree& tree, const std::vector<SchemeStep>& trace,
                                                   const EquilibriumProfile& profile);

}  // namespace dynkin
