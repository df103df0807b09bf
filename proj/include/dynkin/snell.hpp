#pragma once

// Snell envelope of a reward process on a scenario tree and the first-hit
// ε-optimal stopping rule.

#include "dynkin/rational.hpp"
#include "dynkin/tree.hpp"

namespace dynkin {

struct SnellResult {
  AdaptedProcess envelope;
  StoppingRule eps_rule;
  Rational value;  // envelope at the root
};

// Backward recursion: envelope = reward at leaves, and
// envelope(v) = max(reward(v), E[envelope(next) | v]) elsewhere.
AdaptedProcess snell_envelope(const ScenarioTree& tree, const AdaptedProcess& reward);

// Stops at the first node of each path with envelope <= reward + epsilon.
// Ties stop. Throws std::invalid_argument for negative epsilon.
StoppingRule eps_optimal_rule(const ScenarioTree& tree, const AdaptedProcess& reward,
                              const AdaptedProcess& envelope, const Rational& epsilon);

// sup over stopping rules of E[reward at the rule].
Rational optimal_value(const ScenarioTree& tree, const AdaptedProcess& reward);

SnellResult solve_stopping(const ScenarioTree& tree, const AdaptedProcess& reward, const Rational& epsilon);

}  // namespace dynkin
