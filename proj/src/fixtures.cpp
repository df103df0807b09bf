#include "dynkin/fixtures.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>

namespace dynkin::fixtures {

namespace {

using literals::operator""_q;

// Single-path game where every coalition's process is built from per-stage
// values; the terminal stage takes the grand-coalition value.
GameSpec path_game(int num_players, int horizon,
                   const std::function<Rational(int player, Coalition c, int t)>& value) {
  GameSpec spec(num_players, make_path_tree(horizon));
  const Coalition everyone = Coalition::everyone(num_players);
  for (int i = 1; i <= num_players; ++i) {
    for (const Coalition c : all_coalitions(num_players)) {
      std::vector<Rational> values;
      for (int t = 0; t <= horizon; ++t) values.push_back(value(i, t == horizon ? everyone : c, t));
      spec.set_payoff(i, c, AdaptedProcess(std::move(values)));
    }
  }
  return spec;
}

}  // namespace

GameSpec paper_5_1() {
  // Stage-1 payoffs; columns {1},{2},{3},{1,2},{1,3},{2,3},{1,2,3}.
  static const std::array<std::array<Rational, 7>, 3> table = {{
      {"1/2"_q, "1/4"_q, "1/2"_q, "1/4"_q, "1/2"_q, "1/4"_q, "1/4"_q},
      {"1/2"_q, "3/2"_q, "1/2"_q, "1/4"_q, "1/2"_q, "1/4"_q, "1/2"_q},
      {"1/2"_q, "1/4"_q, "1/2"_q, "1/4"_q, "1/2"_q, "1/4"_q, "1/4"_q},
  }};
  const auto columns = all_coalitions(3);
  return path_game(3, 2, [&](int i, Coalition c, int t) -> Rational {
    if (t == 0) return "1/8"_q;
    if (t == 2) return 0;
    const auto col = std::find(columns.begin(), columns.end(), c) - columns.begin();
    return table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(col)];
  });
}

WalkGame paper_5_3() {
  constexpr int kHorizon = 3;
  const std::array<std::pair<int, int>, 4> moves = {{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  std::vector<Node> nodes{{0, 0, std::nullopt, Rational(1)}};
  std::vector<int> walk{0};
  std::vector<int> noise{0};
  std::vector<NodeId> frontier{0};
  for (int t = 1; t <= kHorizon; ++t) {
    std::vector<NodeId> next;
    for (const NodeId p : frontier) {
      for (const auto& [m, n] : moves) {
        const auto id = static_cast<NodeId>(nodes.size());
        nodes.push_back({id, t, p, "1/4"_q});
        walk.push_back(walk[p] + m);
        noise.push_back(n);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }

  WalkGame out{GameSpec(2, ScenarioTree(std::move(nodes))), walk, noise};
  const ScenarioTree& tree = out.game.tree();
  const Coalition one = Coalition::singleton(1);
  const Coalition two = Coalition::singleton(2);
  const Coalition both = Coalition::everyone(2);
  // Offsets relative to S (player 1) and S + N (player 2) for the coalitions
  // {self}, {self, other}, {other}. At T every coalition pays the joint value.
  auto fill = [&](int player, Coalition self, Coalition other) {
    std::vector<Rational> alone(tree.size()), joint(tree.size()), others(tree.size());
    for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
      const Rational base = player == 1 ? Rational(walk[v]) : Rational(walk[v] + noise[v]);
      if (tree.time(v) == 0) {
        // Root values sit far enough below the continuation value that
        // stopping at time 0 is never ε-optimal for ε <= 1/2.
        alone[v] = -2;
        joint[v] = "-3/2"_q;
        others[v] = -1;
      } else if (tree.time(v) == kHorizon) {
        alone[v] = joint[v] = others[v] = base + "1/2"_q;
      } else {
        alone[v] = base;
        joint[v] = base + "1/2"_q;
        others[v] = base + 1;
      }
    }
    out.game.set_payoff(player, self, AdaptedProcess(std::move(alone)));
    out.game.set_payoff(player, both, AdaptedProcess(std::move(joint)));
    out.game.set_payoff(player, other, AdaptedProcess(std::move(others)));
  };
  fill(1, one, two);
  fill(2, two, one);
  return out;
}

GameSpec counterexample_a() {
  return path_game(2, 3, [](int i, Coalition c, int) -> Rational {
    if (c.size() < 2) return 0;
    return i == 1 ? 1 : -1;
  });
}

GameSpec counterexample_b() {
  return path_game(2, 3, [](int i, Coalition c, int) -> Rational { return i == 1 && c.size() == 2 ? 1 : 0; });
}

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = {"paper-5-1", "paper-5-3", "counterexample-a", "counterexample-b"};
  return names;
}

std::string example_description(std::string_view name) {
  if (name == "paper-5-1") {
    return "Three players, deterministic path, T = 2. Every payoff is 1/8 at time 0 and 0 at time 2.";
  }
  if (name == "paper-5-3") {
    return "Two players, T = 3, 4-ary tree over (M_t, N_t) in {-1,1}^2 with probability 1/4 each; S_t is the "
           "walk M_1 + ... + M_t. Player 1: S, S + 1/2, S + 1 for {1}, {1,2}, {2}; player 2: S + N, S + N + 1/2, "
           "S + N + 1 for {2}, {1,2}, {1}. At t = 3 every coalition pays the {1,2} value. Root values are "
           "-2, -3/2, -1 for {self}, {1,2}, {other} so that stopping at time 0 is never eps-optimal for eps <= 1/2.";
  }
  if (name == "counterexample-a") {
    return "Two players, trivial filtration, T = 3. X^{1,{1,2}} = 1, X^{2,{1,2}} = -1, all other payoffs 0 "
           "before T; at T every coalition pays the {1,2} value. Violates the pairwise assumption.";
  }
  if (name == "counterexample-b") {
    return "Two players, trivial filtration, T = 3. X^{1,{1,2}} = 1, all other payoffs 0 before T; at T every "
           "coalition pays the {1,2} value. Violates the pairwise assumption.";
  }
  throw std::invalid_argument("unknown example \"" + std::string(name) + "\"");
}

GameSpec example_game(std::string_view name) {
  if (name == "paper-5-1") return paper_5_1();
  if (name == "paper-5-3") return paper_5_3().game;
  if (name == "counterexample-a") return counterexample_a();
  if (name == "counterexample-b") return counterexample_b();
  throw std::invalid_argument("unknown example \"" + std::string(name) + "\"");
}

bool example_satisfies_assumption_a(std::string_view name) {
  return name == "paper-5-1" || name == "paper-5-3";
}

}  // namespace dynkin::fixtures
