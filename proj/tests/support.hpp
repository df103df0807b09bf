#pragma once

// Random instance generators and brute-force oracles shared by the unit tests
// and the acceptance binary. The oracles deliberately avoid the library's own
// helpers (stop_node_index, path_probability, snell_envelope, enumerate_rules)
// so that agreement is evidence rather than tautology.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "dynkin/game.hpp"
#include "dynkin/rational.hpp"
#include "dynkin/tree.hpp"

namespace dynkin::testing {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// num/den with num in [lo*den, hi*den] and den in 1..max_den.
inline Rational random_rational(Rng& rng, int lo, int hi, int max_den = 4) {
  const int den = uniform_int(rng, 1, max_den);
  return Rational(uniform_int(rng, lo * den, hi * den), den);
}

// Strictly positive weights normalized to sum to one.
inline std::vector<Rational> random_distribution(Rng& rng, int k) {
  std::vector<int> w(static_cast<std::size_t>(k));
  int total = 0;
  for (auto& x : w) total += (x = uniform_int(rng, 1, 6));
  std::vector<Rational> out;
  for (int x : w) out.emplace_back(x, total);
  return out;
}

// Uniform-depth tree with at most max_nodes nodes, random branching and
// random rational branch probabilities. Node ids are assigned breadth first.
inline ScenarioTree random_tree(Rng& rng, int max_nodes = 12) {
  const int horizon = uniform_int(rng, 1, std::min(3, max_nodes - 1));
  std::vector<Node> nodes{{0, 0, std::nullopt, Rational(1)}};
  std::vector<NodeId> level{0};
  for (int t = 1; t <= horizon; ++t) {
    std::vector<NodeId> next;
    const int later = horizon - t;  // levels below the one being built
    for (std::size_t k = 0; k < level.size(); ++k) {
      // Keep room for one chain down to the horizon from every open node.
      const int pending = static_cast<int>(level.size() - k - 1);
      const int budget = max_nodes - static_cast<int>(nodes.size()) - static_cast<int>(next.size()) * later -
                         pending * (1 + later);
      const int kids = uniform_int(rng, 1, std::max(1, std::min(3, budget / (1 + later))));
      const auto probs = random_distribution(rng, kids);
      for (int c = 0; c < kids; ++c) {
        const auto id = static_cast<NodeId>(nodes.size());
        nodes.push_back({id, t, level[k], probs[static_cast<std::size_t>(c)]});
        next.push_back(id);
      }
    }
    level = std::move(next);
  }
  return ScenarioTree(std::move(nodes));
}

// Full binary tree of the given horizon with per-node random probabilities.
inline ScenarioTree random_binary_tree(Rng& rng, int horizon) {
  std::vector<Node> nodes{{0, 0, std::nullopt, Rational(1)}};
  std::vector<NodeId> level{0};
  for (int t = 1; t <= horizon; ++t) {
    std::vector<NodeId> next;
    for (const NodeId p : level) {
      const auto probs = random_distribution(rng, 2);
      for (int c = 0; c < 2; ++c) {
        const auto id = static_cast<NodeId>(nodes.size());
        nodes.push_back({id, t, p, probs[static_cast<std::size_t>(c)]});
        next.push_back(id);
      }
    }
    level = std::move(next);
  }
  return ScenarioTree(std::move(nodes));
}

inline AdaptedProcess random_process(Rng& rng, const ScenarioTree& tree, int lo = -3, int hi = 3) {
  std::vector<Rational> v;
  for (std::size_t k = 0; k < tree.size(); ++k) v.push_back(random_rational(rng, lo, hi));
  return AdaptedProcess(std::move(v));
}

// Payoffs in [-2, 2] with X^{i,{i,j}} <= X^{i,{j}} before T and every
// coalition equal to the grand coalition at T.
inline GameSpec random_assumption_a_game(Rng& rng, int num_players, int horizon) {
  GameSpec spec(num_players, random_binary_tree(rng, horizon));
  const ScenarioTree& tree = spec.tree();
  const auto coalitions = all_coalitions(num_players);
  const Coalition everyone = Coalition::everyone(num_players);
  for (int i = 1; i <= num_players; ++i) {
    std::vector<AdaptedProcess> procs;
    for (std::size_t k = 0; k < coalitions.size(); ++k) procs.push_back(random_process(rng, tree, -2, 2));
    auto index_of = [&](Coalition c) {
      return static_cast<std::size_t>(std::find(coalitions.begin(), coalitions.end(), c) - coalitions.begin());
    };
    const AdaptedProcess grand = procs[index_of(everyone)];
    for (const NodeId v : tree.leaves()) {
      for (auto& p : procs) p[v] = grand[v];
    }
    for (int j = 1; j <= num_players; ++j) {
      if (j == i) continue;
      AdaptedProcess& joint = procs[index_of(Coalition{i, j})];
      const AdaptedProcess& alone = procs[index_of(Coalition::singleton(j))];
      for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
        if (joint[v] > alone[v]) joint[v] = alone[v];
      }
    }
    for (std::size_t k = 0; k < coalitions.size(); ++k) spec.set_payoff(i, coalitions[k], procs[k]);
  }
  return spec;
}

inline std::vector<int> random_order(Rng& rng, int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k + 1;
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

// ---- oracles -------------------------------------------------------------

inline std::vector<NodeId> oracle_path(const ScenarioTree& tree, NodeId leaf) {
  std::vector<NodeId> path;
  for (NodeId v = leaf; v != kNoNode; v = tree.parent(v)) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

inline Rational oracle_path_probability(const ScenarioTree& tree, NodeId leaf) {
  Rational p(1);
  for (NodeId v = leaf; v != kNoNode; v = tree.parent(v)) p *= tree.branch_prob(v);
  return p;
}

// E[process at the first stop on each path], NEVER paths read the leaf.
inline Rational oracle_expectation(const ScenarioTree& tree, const AdaptedProcess& process,
                                   const std::set<NodeId>& stops) {
  Rational total(0);
  for (const NodeId leaf : tree.leaves()) {
    NodeId at = leaf;
    for (const NodeId v : oracle_path(tree, leaf)) {
      if (stops.count(v)) {
        at = v;
        break;
      }
    }
    total += oracle_path_probability(tree, leaf) * process[at];
  }
  return total;
}

// Every antichain of the tree, found by scanning all node subsets.
inline std::vector<std::set<NodeId>> oracle_antichains(const ScenarioTree& tree) {
  const auto n = static_cast<int>(tree.size());
  std::vector<std::set<NodeId>> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      if (!((mask >> a) & 1u)) continue;
      for (NodeId up = tree.parent(a); up != kNoNode; up = tree.parent(up)) {
        if ((mask >> up) & 1u) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    std::set<NodeId> s;
    for (int a = 0; a < n; ++a) {
      if ((mask >> a) & 1u) s.insert(a);
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::set<NodeId> as_set(const StoppingRule& rule) { return {rule.stops().begin(), rule.stops().end()}; }

// Exhaustive sup over stopping rules.
inline Rational oracle_optimal_value(const ScenarioTree& tree, const AdaptedProcess& reward) {
  const auto chains = oracle_antichains(tree);
  Rational best = oracle_expectation(tree, reward, chains.front());
  for (const auto& c : chains) best = max(best, oracle_expectation(tree, reward, c));
  return best;
}

// Payoff functional evaluated straight from its definition, path by path.
inline std::vector<Rational> oracle_payoffs(const GameSpec& spec, const std::vector<std::set<NodeId>>& profile) {
  const ScenarioTree& tree = spec.tree();
  const int n = spec.num_players();
  std::vector<Rational> out(static_cast<std::size_t>(n), Rational(0));
  for (const NodeId leaf : tree.leaves()) {
    NodeId at = leaf;
    std::vector<int> members;
    for (const NodeId v : oracle_path(tree, leaf)) {
      for (int i = 1; i <= n; ++i) {
        if (profile[static_cast<std::size_t>(i - 1)].count(v)) members.push_back(i);
      }
      if (!members.empty()) {
        at = v;
        break;
      }
    }
    const Coalition c = members.empty() ? Coalition::everyone(n) : Coalition::from_members(members, n);
    const Rational p = oracle_path_probability(tree, leaf);
    for (int i = 1; i <= n; ++i) out[static_cast<std::size_t>(i - 1)] += p * spec.payoff(i, c, at);
  }
  return out;
}

inline std::vector<std::set<NodeId>> as_sets(const StrategyProfile& profile) {
  std::vector<std::set<NodeId>> out;
  for (const auto& r : profile.rules) out.push_back(as_set(r));
  return out;
}

// Stage at which each player's rule stops on a single-path tree, T+1 for NEVER.
inline std::vector<int> path_stages(const ScenarioTree& tree, const StrategyProfile& profile) {
  std::vector<int> out;
  for (const auto& r : profile.rules) out.push_back(r.stops().empty() ? tree.horizon() + 1 : tree.time(r.stops()[0]));
  return out;
}

}  // namespace dynkin::testing
