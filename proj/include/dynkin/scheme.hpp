#pragma once

// Circular best-response construction of an ε-Nash equilibrium in stopping
// times. Players are visited cyclically; at each step the visited player
// solves an ε-optimal stopping problem against the latest rules of the
// others, and its rule is only allowed to move earlier.

#include <deque>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dynkin/game.hpp"
#include "dynkin/rational.hpp"
#include "dynkin/tree.hpp"

namespace dynkin {

enum class Initialization {
  kNever,    // τ_1 = ... = τ_N = NEVER
  kHorizon,  // τ_1 = ... = τ_N = stop at T
};

struct SchemeConfig {
  Rational epsilon{0};
  std::vector<int> order;  // player visited at position k of a round; empty = identity
  int max_rounds = 0;      // 0 = termination_bound(spec)
  Initialization init = Initialization::kNever;
};

struct SchemeStep {
  int n = 0;
  int player = 0;
  StoppingRule theta;
  std::map<NodeId, Coalition> coalition_at_theta;  // keyed by theta's stop nodes
  AdaptedProcess stage_reward;
  AdaptedProcess envelope;
  StoppingRule mu;
  StoppingRule tau;
};

using PlayerRule = std::pair<int, StoppingRule>;

struct SchemeState {
  int next_n = 0;
  std::deque<PlayerRule> recent;  // τ_{n-N} .. τ_{n-1}, oldest first
};

struct StageReward {
  AdaptedProcess reward;
  std::map<NodeId, Coalition> coalitions;
};

// The visited player's reward against the others' rules: X^{i,{i}} strictly
// before theta, then frozen at max(X^{i,I∪{i}}, X^{i,I}) of the theta node,
// where I is the set of others stopping there. Throws std::invalid_argument
// if theta is not the pathwise minimum of prev_taus.
StageReward build_stage_reward(const GameSpec& spec, int player, const StoppingRule& theta,
                               std::span<const PlayerRule> prev_taus);

// Throws std::invalid_argument on a bad order or negative epsilon.
std::vector<int> resolve_order(const GameSpec& spec, const SchemeConfig& config);

SchemeState initial_state(const GameSpec& spec, const SchemeConfig& config);
SchemeStep scheme_step(const GameSpec& spec, const SchemeConfig& config, const SchemeState& state);
SchemeState advance(const SchemeState& state, const SchemeStep& step);

// Rounds needed in the worst case: N · leaves · (T + 1) + 1.
long termination_bound(const GameSpec& spec);

struct EquilibriumProfile {
  StrategyProfile uncapped;
  StrategyProfile capped;
  StoppingRule termination_rule;
  int rounds_used = 0;
  std::vector<int> order;
  Rational epsilon{0};
  Initialization init = Initialization::kNever;
  std::vector<PlayerRule> initial_taus;
  std::vector<SchemeStep> trace;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, std::vector<SchemeStep> partial)
      : std::runtime_error(what), partial_trace_(std::move(partial)) {}
  const std::vector<SchemeStep>& partial_trace() const { return partial_trace_; }

 private:
  std::vector<SchemeStep> partial_trace_;
};

// Iterates until N consecutive steps leave τ unchanged. Throws
// NonConvergenceError (with the trace so far) after max_rounds rounds.
EquilibriumProfile run_scheme(const GameSpec& spec, const SchemeConfig& config);

// Builds the rule whose value on each leaf is values[k] (tree.leaves()
// order). Throws std::logic_error if the values are not a stopping time.
StoppingRule rule_from_path_values(const ScenarioTree& tree, std::span<const Stage> values);

}  // namespace dynkin
