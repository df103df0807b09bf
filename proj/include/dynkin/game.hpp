#pragma once

// N-player nonzero-sum Dynkin games on a scenario tree: coalition-indexed
// payoff processes, their validation, and the realized payoff functional.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynkin/rational.hpp"
#include "dynkin/tree.hpp"

namespace dynkin {

inline constexpr int kMaxPlayers = 16;

// Non-empty set of players, 1-based, stored as a bitmask (bit i-1 = player i).
class Coalition {
 public:
  Coalition() = default;
  // Throws std::invalid_argument if members is empty or outside 1..num_players.
  Coalition(std::initializer_list<int> members, int num_players = kMaxPlayers);
  static Coalition from_members(const std::vector<int>& members, int num_players = kMaxPlayers);
  static Coalition from_mask(std::uint32_t mask) { return Coalition(mask); }
  static Coalition singleton(int player) { return Coalition(std::uint32_t{1} << (player - 1)); }
  static Coalition everyone(int num_players) { return Coalition((std::uint32_t{1} << num_players) - 1); }

  std::uint32_t mask() const { return mask_; }
  bool contains(int player) const { return (mask_ >> (player - 1)) & 1u; }
  int size() const;
  std::vector<int> members() const;
  Coalition with(int player) const { return Coalition(mask_ | (std::uint32_t{1} << (player - 1))); }
  std::string str() const;  // "{1,3}"

  friend bool operator==(Coalition, Coalition) = default;
  friend auto operator<=>(Coalition, Coalition) = default;

 private:
  explicit Coalition(std::uint32_t mask) : mask_(mask) {}
  std::uint32_t mask_ = 0;
};

// All 2^N - 1 coalitions, ordered by size, then lexicographically.
std::vector<Coalition> all_coalitions(int num_players);

class GameSpec {
 public:
  GameSpec(int num_players, ScenarioTree tree);

  int num_players() const { return num_players_; }
  int horizon() const { return tree_.horizon(); }
  const ScenarioTree& tree() const { return tree_; }

  void set_payoff(int player, Coalition coalition, AdaptedProcess values);
  bool has_payoff(int player, Coalition coalition) const;
  // Throws std::out_of_range if the process was never set.
  const AdaptedProcess& payoff(int player, Coalition coalition) const;
  const Rational& payoff(int player, Coalition coalition, NodeId v) const { return payoff(player, coalition)[v]; }

  // Set by embed_finite_horizon once terminal coincidence has been checked.
  bool embedded() const { return embedded_; }

 private:
  friend GameSpec embed_finite_horizon(const GameSpec& spec);

  std::size_t slot(int player, Coalition coalition) const;

  int num_players_;
  ScenarioTree tree_;
  std::vector<std::optional<AdaptedProcess>> payoffs_;
  bool embedded_ = false;
};

struct GameViolation {
  std::string kind;  // "tree", "totality", "terminal", "assumption_a", "players"
  std::string message;

  std::string str() const { return kind + ": " + message; }
};

// Empty iff payoffs are total, every coalition agrees with the grand
// coalition at the leaves, and (when enforce_assumption_a) for all i != j and
// every node before the horizon X^{i,{i,j}} <= X^{i,{j}}.
std::vector<GameViolation> validate_game(const GameSpec& spec, bool enforce_assumption_a);

// Throws ValidationError when validate_game reports anything.
void require_valid(const GameSpec& spec, bool enforce_assumption_a);

// Identity on payoff data; marks the game as embedded in the infinite-horizon
// setting (processes constant from T on). Throws ValidationError on a
// terminal-coincidence violation.
GameSpec embed_finite_horizon(const GameSpec& spec);

struct StrategyProfile {
  std::vector<StoppingRule> rules;  // rules[i-1] for player i

  const StoppingRule& rule(int player) const { return rules.at(static_cast<std::size_t>(player - 1)); }
  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

StrategyProfile cap_profile(const ScenarioTree& tree, const StrategyProfile& profile);
// Profile where player i stops at stage stages[i-1] everywhere (T+1 or more
// means NEVER).
StrategyProfile constant_profile(const ScenarioTree& tree, const std::vector<int>& stages);

struct Outcome {
  Stage stage;          // R = min of the players' rule values
  Coalition coalition;  // players attaining R; everyone when R is NEVER
  NodeId node;          // node at R on the path, or the leaf when R is NEVER
};

Outcome realized_outcome(const GameSpec& spec, const StrategyProfile& profile, NodeId leaf);

// E[J_i] for every player.
std::vector<Rational> expected_payoffs(const GameSpec& spec, const StrategyProfile& profile);

}  // namespace dynkin
