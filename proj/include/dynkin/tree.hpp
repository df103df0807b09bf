#pragma once

// Finite filtered probability spaces as uniform-depth scenario trees, with
// adapted processes and stopping rules living on top of them.

#include <climits>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynkin/rational.hpp"

namespace dynkin {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// A stage index 0..T, or NEVER, which orders after every stage.
class Stage {
 public:
  constexpr explicit Stage(int t) : value_(t) {}
  static constexpr Stage never() { return Stage(INT_MAX); }

  constexpr bool is_never() const { return value_ == INT_MAX; }
  constexpr int value() const { return value_; }
  std::string str() const { return is_never() ? "never" : std::to_string(value_); }

  friend constexpr auto operator<=>(Stage, Stage) = default;

 private:
  int value_;
};

struct Node {
  NodeId id = 0;
  int time = 0;
  std::optional<NodeId> parent;
  Rational prob{1};
};

struct TreeViolation {
  NodeId node;
  std::string rule;

  std::string str() const { return "node " + std::to_string(node) + ": " + rule; }
};

// Empty iff the nodes form a valid uniform-depth scenario tree. Node ids must
// be exactly 0..n-1.
std::vector<TreeViolation> validate_tree(std::span<const Node> nodes);

class ScenarioTree {
 public:
  // Throws ValidationError listing every violation when the nodes are not a
  // valid tree.
  explicit ScenarioTree(std::vector<Node> nodes);

  std::size_t size() const { return nodes_.size(); }
  int horizon() const { return horizon_; }
  NodeId root() const { return root_; }
  bool contains(NodeId v) const { return v >= 0 && static_cast<std::size_t>(v) < nodes_.size(); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId v) const { return nodes_.at(static_cast<std::size_t>(v)); }
  int time(NodeId v) const { return node(v).time; }
  NodeId parent(NodeId v) const { return node(v).parent.value_or(kNoNode); }
  const Rational& branch_prob(NodeId v) const { return node(v).prob; }
  bool is_leaf(NodeId v) const { return children(v).empty(); }

  std::span<const NodeId> children(NodeId v) const { return children_.at(static_cast<std::size_t>(v)); }
  std::span<const NodeId> leaves() const { return leaves_; }
  std::span<const NodeId> nodes_at(int t) const { return by_time_.at(static_cast<std::size_t>(t)); }
  const Rational& path_probability(NodeId v) const { return path_prob_.at(static_cast<std::size_t>(v)); }

  // True when a is v or a strict ancestor of v.
  bool is_ancestor_or_self(NodeId a, NodeId v) const;
  // Node on v's root path at stage t (t <= time(v)).
  NodeId ancestor_at(NodeId v, int t) const;
  // Root-to-v node sequence.
  std::vector<NodeId> path_to(NodeId v) const;

 private:
  std::vector<Node> nodes_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::vector<NodeId>> by_time_;
  std::vector<NodeId> leaves_;
  std::vector<Rational> path_prob_;
  NodeId root_ = 0;
  int horizon_ = 0;
};

// Deterministic tree: one node per stage 0..horizon.
ScenarioTree make_path_tree(int horizon);
// Every non-leaf has one child per entry of branch_probs.
ScenarioTree make_uniform_tree(int horizon, std::span<const Rational> branch_probs);

// One rational per node, indexed by node id.
class AdaptedProcess {
 public:
  AdaptedProcess() = default;
  explicit AdaptedProcess(std::vector<Rational> values) : values_(std::move(values)) {}
  static AdaptedProcess constant(const ScenarioTree& tree, const Rational& c) {
    return AdaptedProcess(std::vector<Rational>(tree.size(), c));
  }

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](NodeId v) const { return values_[static_cast<std::size_t>(v)]; }
  Rational& operator[](NodeId v) { return values_[static_cast<std::size_t>(v)]; }
  std::span<const Rational> values() const { return values_; }

  friend bool operator==(const AdaptedProcess&, const AdaptedProcess&) = default;

 private:
  std::vector<Rational> values_;
};

// Throws std::invalid_argument unless the process is total on the tree.
void require_total(const ScenarioTree& tree, const AdaptedProcess& process);

// A pure stopping rule as an antichain of stop nodes. Paths that avoid every
// stop node carry NEVER. The default rule is NEVER everywhere.
class StoppingRule {
 public:
  StoppingRule() = default;
  static StoppingRule never() { return {}; }

  std::span<const NodeId> stops() const { return stops_; }
  bool is_never_everywhere() const { return stops_.empty(); }
  bool stops_at(NodeId v) const;

  friend bool operator==(const StoppingRule&, const StoppingRule&) = default;

 private:
  friend StoppingRule canonicalize_rule(const ScenarioTree& tree, std::span<const NodeId> flags);
  explicit StoppingRule(std::vector<NodeId> sorted_antichain) : stops_(std::move(sorted_antichain)) {}

  std::vector<NodeId> stops_;
};

// Drops every flag that has a flagged strict ancestor. Throws
// std::invalid_argument on unknown node ids.
StoppingRule canonicalize_rule(const ScenarioTree& tree, std::span<const NodeId> flags);

// Pathwise minimum; NEVER is the largest value. Throws on an empty list.
StoppingRule min_of_rules(const ScenarioTree& tree, std::span<const StoppingRule> rules);

StoppingRule stop_at_stage(const ScenarioTree& tree, int t);
// min(rule, stop at T).
StoppingRule cap_at_horizon(const ScenarioTree& tree, const StoppingRule& rule);

// For every node v, the stop node on the root..v path (inclusive), or kNoNode
// if the rule has not stopped by v. Throws std::invalid_argument if the rule
// does not belong to the tree.
std::vector<NodeId> stop_node_index(const ScenarioTree& tree, const StoppingRule& rule);

// Rule value on the root path ending at leaf.
Stage rule_value(const ScenarioTree& tree, const StoppingRule& rule, NodeId leaf);
// Rule value for every leaf, in tree.leaves() order.
std::vector<Stage> path_values(const ScenarioTree& tree, const StoppingRule& rule);

// Σ_c branch_prob(c) · process(c) over the children of node.
Rational one_step_expectation(const ScenarioTree& tree, const AdaptedProcess& process, NodeId node);

// E[process at the rule's stop]; NEVER paths read the process at their leaf.
Rational expectation_under_rule(const ScenarioTree& tree, const AdaptedProcess& process,
                                const StoppingRule& rule);

}  // namespace dynkin
