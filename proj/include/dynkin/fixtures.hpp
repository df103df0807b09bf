#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dynkin/game.hpp"

namespace dynkin::fixtures {

// Three players, deterministic single path, T = 2.
GameSpec paper_5_1();

// Two players, T = 3, four children per node for (M, N) in {-1,1}^2 with
// probability 1/4 each. walk[v] = M_1 + ... + M_t and noise[v] = N_t at node
// v (noise is 0 at the root).
struct WalkGame {
  GameSpec game;
  std::vector<int> walk;
  std::vector<int> noise;
};
WalkGame paper_5_3();

// Two players on a single path with T = 3; both break the pairwise
// assumption. In A player 1 wants to meet player 2 and player 2 wants to avoid
// player 1; in B player 2 is indifferent.
GameSpec counterexample_a();
GameSpec counterexample_b();

const std::vector<std::string>& example_names();
std::string example_description(std::string_view name);
// Throws std::invalid_argument for an unknown name.
GameSpec example_game(std::string_view name);
// Whether the example is meant to satisfy the pairwise assumption.
bool example_satisfies_assumption_a(std::string_view name);

}  // namespace dynkin::fixtures
