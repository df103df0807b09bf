#include "dynkin/game.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "dynkin/errors.hpp"

namespace dynkin {

Coalition::Coalition(std::initializer_list<int> members, int num_players)
    : Coalition(from_members(std::vector<int>(members), num_players)) {}

Coalition Coalition::from_members(const std::vector<int>& members, int num_players) {
  if (members.empty()) throw std::invalid_argument("coalition must be non-empty");
  std::uint32_t mask = 0;
  for (const int p : members) {
    if (p < 1 || p > num_players) {
      throw std::invalid_argument("coalition member " + std::to_string(p) + " outside 1.." +
                                  std::to_string(num_players));
    }
    mask |= std::uint32_t{1} << (p - 1);
  }
  return Coalition(mask);
}

int Coalition::size() const { return std::popcount(mask_); }

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  for (int p = 1; p <= 32; ++p) {
    if (contains(p)) out.push_back(p);
  }
  return out;
}

std::string Coalition::str() const {
  std::string s = "{";
  for (const int p : members()) {
    if (s.size() > 1) s += ",";
    s += std::to_string(p);
  }
  return s + "}";
}

std::vector<Coalition> all_coalitions(int num_players) {
  std::vector<Coalition> out;
  for (std::uint32_t m = 1; m < (std::uint32_t{1} << num_players); ++m) out.push_back(Coalition::from_mask(m));
  std::sort(out.begin(), out.end(), [](Coalition a, Coalition b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members() < b.members();
  });
  return out;
}

GameSpec::GameSpec(int num_players, ScenarioTree tree) : num_players_(num_players), tree_(std::move(tree)) {
  if (num_players < 2 || num_players > kMaxPlayers) {
    throw std::invalid_argument("number of players must be in 2.." + std::to_string(kMaxPlayers));
  }
  payoffs_.resize(static_cast<std::size_t>(num_players) << num_players);
}

std::size_t GameSpec::slot(int player, Coalition coalition) const {
  if (player < 1 || player > num_players_) throw std::out_of_range("player " + std::to_string(player));
  if (coalition.mask() == 0 || coalition.mask() >= (std::uint32_t{1} << num_players_)) {
    throw std::out_of_range("coalition " + coalition.str());
  }
  return (static_cast<std::size_t>(player - 1) << num_players_) + coalition.mask();
}

void GameSpec::set_payoff(int player, Coalition coalition, AdaptedProcess values) {
  require_total(tree_, values);
  payoffs_[slot(player, coalition)] = std::move(values);
  embedded_ = false;
}

bool GameSpec::has_payoff(int player, Coalition coalition) const {
  return payoffs_[slot(player, coalition)].has_value();
}

const AdaptedProcess& GameSpec::payoff(int player, Coalition coalition) const {
  const auto& p = payoffs_[slot(player, coalition)];
  if (!p) throw std::out_of_range("no payoff for player " + std::to_string(player) + ", coalition " + coalition.str());
  return *p;
}

std::vector<GameViolation> validate_game(const GameSpec& spec, bool enforce_assumption_a) {
  std::vector<GameViolation> out;
  const int n = spec.num_players();
  const ScenarioTree& tree = spec.tree();
  if (tree.horizon() < 1) out.push_back({"tree", "horizon must be at least 1"});

  const auto coalitions = all_coalitions(n);
  bool total = true;
  for (int i = 1; i <= n; ++i) {
    for (const Coalition c : coalitions) {
      if (!spec.has_payoff(i, c)) {
        out.push_back({"totality", "payoffs not total: missing player " + std::to_string(i) + ", coalition " + c.str()});
        total = false;
      }
    }
  }
  if (!total) return out;

  const Coalition everyone = Coalition::everyone(n);
  for (int i = 1; i <= n; ++i) {
    const AdaptedProcess& grand = spec.payoff(i, everyone);
    for (const Coalition c : coalitions) {
      const AdaptedProcess& x = spec.payoff(i, c);
      for (const NodeId leaf : tree.leaves()) {
        if (x[leaf] != grand[leaf]) {
          out.push_back({"terminal", "player " + std::to_string(i) + ", coalition " + c.str() + ", node " +
                                         std::to_string(leaf) + ": terminal value " + x[leaf].str() +
                                         " differs from grand-coalition value " + grand[leaf].str()});
        }
      }
    }
  }

  if (enforce_assumption_a) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        const AdaptedProcess& joint = spec.payoff(i, Coalition{i, j});
        const AdaptedProcess& alone = spec.payoff(i, Coalition::singleton(j));
        for (int t = 0; t < tree.horizon(); ++t) {
          for (const NodeId v : tree.nodes_at(t)) {
            if (joint[v] > alone[v]) {
              out.push_back({"assumption_a", "player " + std::to_string(i) + ", j = " + std::to_string(j) +
                                                 ", node " + std::to_string(v) + " (time " + std::to_string(t) +
                                                 "): X^{i,{i,j}} = " + joint[v].str() + " > X^{i,{j}} = " +
                                                 alone[v].str()});
            }
          }
        }
      }
    }
  }
  return out;
}

void require_valid(const GameSpec& spec, bool enforce_assumption_a) {
  const auto violations = validate_game(spec, enforce_assumption_a);
  if (violations.empty()) return;
  std::vector<std::string> details;
  for (const auto& v : violations) details.push_back(v.str());
  throw ValidationError("invalid game", std::move(details));
}

GameSpec embed_finite_horizon(const GameSpec& spec) {
  for (const auto& v : validate_game(spec, false)) {
    if (v.kind == "terminal" || v.kind == "totality") {
      throw ValidationError("cannot embed game: " + v.message);
    }
  }
  GameSpec out = spec;
  out.embedded_ = true;
  return out;
}

StrategyProfile cap_profile(const ScenarioTree& tree, const StrategyProfile& profile) {
  StrategyProfile out;
  for (const auto& r : profile.rules) out.rules.push_back(cap_at_horizon(tree, r));
  return out;
}

StrategyProfile constant_profile(const ScenarioTree& tree, const std::vector<int>& stages) {
  StrategyProfile out;
  for (const int t : stages) {
    out.rules.push_back(t > tree.horizon() ? StoppingRule::never() : stop_at_stage(tree, t));
  }
  return out;
}

namespace {

void require_profile(const GameSpec& spec, const StrategyProfile& profile) {
  if (static_cast<int>(profile.rules.size()) != spec.num_players()) {
    throw std::invalid_argument("profile has " + std::to_string(profile.rules.size()) + " rules for " +
                                std::to_string(spec.num_players()) + " players");
  }
}

// Outcome on every leaf, with the per-player stop indices computed once.
std::vector<Outcome> outcomes(const GameSpec& spec, const StrategyProfile& profile) {
  require_profile(spec, profile);
  const ScenarioTree& tree = spec.tree();
  std::vector<std::vector<NodeId>> index;
  for (const auto& r : profile.rules) index.push_back(stop_node_index(tree, r));
  std::vector<Outcome> out;
  for (const NodeId leaf : tree.leaves()) {
    Stage r = Stage::never();
    for (const auto& idx : index) {
      if (idx[leaf] != kNoNode) r = std::min(r, Stage(tree.time(idx[leaf])));
    }
    if (r.is_never()) {
      out.push_back({r, Coalition::everyone(spec.num_players()), leaf});
      continue;
    }
    std::vector<int> members;
    for (std::size_t p = 0; p < index.size(); ++p) {
      if (index[p][leaf] != kNoNode && tree.time(index[p][leaf]) == r.value()) {
        members.push_back(static_cast<int>(p) + 1);
      }
    }
    out.push_back({r, Coalition::from_members(members), tree.ancestor_at(leaf, r.value())});
  }
  return out;
}

}  // namespace

Outcome realized_outcome(const GameSpec& spec, const StrategyProfile& profile, NodeId leaf) {
  const auto all = outcomes(spec, profile);
  const auto leaves = spec.tree().leaves();
  const auto it = std::find(leaves.begin(), leaves.end(), leaf);
  if (it == leaves.end()) throw std::invalid_argument("node " + std::to_string(leaf) + " is not a leaf");
  return all[static_cast<std::size_t>(it - leaves.begin())];
}

std::vector<Rational> expected_payoffs(const GameSpec& spec, const StrategyProfile& profile) {
  const auto all = outcomes(spec, profile);
  const ScenarioTree& tree = spec.tree();
  std::vector<Rational> out(static_cast<std::size_t>(spec.num_players()));
  for (std::size_t k = 0; k < all.size(); ++k) {
    const NodeId leaf = tree.leaves()[k];
    for (int i = 1; i <= spec.num_players(); ++i) {
      out[i - 1] += tree.path_probability(leaf) * spec.payoff(i, all[k].coalition, all[k].node);
    }
  }
  return out;
}

}  // namespace dynkin
