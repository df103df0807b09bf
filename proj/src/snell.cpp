#include "dynkin/snell.hpp"

#include <stdexcept>
#include <vector>

namespace dynkin {

AdaptedProcess snell_envelope(const ScenarioTree& tree, const AdaptedProcess& reward) {
  require_total(tree, reward);
  AdaptedProcess envelope = reward;
  for (int t = tree.horizon() - 1; t >= 0; --t) {
    for (const NodeId v : tree.nodes_at(t)) {
      Rational continuation;
      for (const NodeId c : tree.children(v)) continuation += tree.branch_prob(c) * envelope[c];
      if (continuation > envelope[v]) envelope[v] = std::move(continuation);
    }
  }
  return envelope;
}

StoppingRule eps_optimal_rule(const ScenarioTree& tree, const AdaptedProcess& reward,
                              const AdaptedProcess& envelope, const Rational& epsilon) {
  if (epsilon.sign() < 0) throw std::invalid_argument("epsilon must be non-negative, got " + epsilon.str());
  require_total(tree, reward);
  require_total(tree, envelope);
  std::vector<NodeId> hits;
  for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
    if (envelope[v] <= reward[v] + epsilon) hits.push_back(v);
  }
  return canonicalize_rule(tree, hits);
}

Rational optimal_value(const ScenarioTree& tree, const AdaptedProcess& reward) {
  return snell_envelope(tree, reward)[tree.root()];
}

SnellResult solve_stopping(const ScenarioTree& tree, const AdaptedProcess& reward, const Rational& epsilon) {
  AdaptedProcess envelope = snell_envelope(tree, reward);
  StoppingRule rule = eps_optimal_rule(tree, reward, envelope, epsilon);
  Rational value = envelope[tree.root()];
  return {std::move(envelope), std::move(rule), std::move(value)};
}

}  // namespace dynkin
