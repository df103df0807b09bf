#include "dynkin/tree.hpp"

#include <algorithm>
#include <stdexcept>

#include "dynkin/errors.hpp"

namespace dynkin {

std::vector<TreeViolation> validate_tree(std::span<const Node> nodes) {
  std::vector<TreeViolation> out;
  const auto n = static_cast<NodeId>(nodes.size());
  if (n == 0) {
    out.push_back({kNoNode, "tree has no nodes"});
    return out;
  }

  // Ids must be a permutation of 0..n-1; everything below indexes by id.
  std::vector<const Node*> by_id(nodes.size(), nullptr);
  bool ids_ok = true;
  for (const Node& node : nodes) {
    if (node.id < 0 || node.id >= n) {
      out.push_back({node.id, "id out of range 0.." + std::to_string(n - 1)});
      ids_ok = false;
    } else if (by_id[node.id] != nullptr) {
      out.push_back({node.id, "duplicate id"});
      ids_ok = false;
    } else {
      by_id[node.id] = &node;
    }
  }
  if (!ids_ok) return out;

  std::vector<std::vector<NodeId>> children(nodes.size());
  std::vector<NodeId> roots;
  for (NodeId v = 0; v < n; ++v) {
    const Node& node = *by_id[v];
    if (!node.parent) {
      roots.push_back(v);
    } else if (*node.parent < 0 || *node.parent >= n || *node.parent == v) {
      out.push_back({v, "unknown parent " + std::to_string(*node.parent)});
    } else {
      children[*node.parent].push_back(v);
    }
    if (node.prob <= Rational(0) || node.prob > Rational(1)) {
      out.push_back({v, "branch probability " + node.prob.str() + " not in (0,1]"});
    }
  }
  if (roots.empty()) out.push_back({kNoNode, "no root (every node has a parent)"});
  for (std::size_t k = 1; k < roots.size(); ++k) out.push_back({roots[k], "second root"});
  if (roots.empty()) return out;

  const NodeId root = roots.front();
  if (by_id[root]->time != 0) out.push_back({root, "root time must be 0"});
  if (by_id[root]->prob != Rational(1)) out.push_back({root, "root branch probability must be 1"});

  int horizon = 0;
  std::vector<bool> reached(nodes.size(), false);
  std::vector<NodeId> stack{root};
  reached[root] = true;
  std::vector<NodeId> leaves;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const Node& node = *by_id[v];
    if (children[v].empty()) {
      leaves.push_back(v);
      horizon = std::max(horizon, node.time);
      continue;
    }
    Rational total;
    for (const NodeId c : children[v]) {
      total += by_id[c]->prob;
      if (by_id[c]->time != node.time + 1) {
        out.push_back({c, "time " + std::to_string(by_id[c]->time) + " is not parent time + 1"});
      }
      if (!reached[c]) {
        reached[c] = true;
        stack.push_back(c);
      }
    }
    if (total != Rational(1)) {
      out.push_back({v, "children probabilities sum to " + total.str() + ", not 1"});
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!reached[v] && by_id[v]->parent) out.push_back({v, "unreachable from root"});
  }
  for (const NodeId leaf : leaves) {
    if (by_id[leaf]->time != horizon) {
      out.push_back({leaf, "leaf at time " + std::to_string(by_id[leaf]->time) +
                               " but horizon is " + std::to_string(horizon)});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TreeViolation& a, const TreeViolation& b) { return a.node < b.node; });
  return out;
}

ScenarioTree::ScenarioTree(std::vector<Node> nodes) {
  const auto violations = validate_tree(nodes);
  if (!violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back(v.str());
    throw ValidationError("invalid scenario tree", std::move(details));
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  nodes_ = std::move(nodes);
  children_.resize(nodes_.size());
  path_prob_.resize(nodes_.size());
  for (const Node& node : nodes_) {
    if (node.parent) {
      children_[*node.parent].push_back(node.id);
    } else {
      root_ = node.id;
    }
    horizon_ = std::max(horizon_, node.time);
  }
  by_time_.resize(static_cast<std::size_t>(horizon_) + 1);
  // Breadth-first so path probabilities of parents are ready before children.
  std::vector<NodeId> frontier{root_};
  path_prob_[root_] = Rational(1);
  while (!frontier.empty()) {
    std::vector<NodeId> next;
    for (const NodeId v : frontier) {
      by_time_[nodes_[v].time].push_back(v);
      if (children_[v].empty()) leaves_.push_back(v);
      for (const NodeId c : children_[v]) {
        path_prob_[c] = path_prob_[v] * nodes_[c].prob;
        next.push_back(c);
      }
    }
    frontier = std::move(next);
  }
}

bool ScenarioTree::is_ancestor_or_self(NodeId a, NodeId v) const {
  while (v != kNoNode && time(v) > time(a)) v = parent(v);
  return v == a;
}

NodeId ScenarioTree::ancestor_at(NodeId v, int t) const {
  if (t < 0 || t > time(v)) throw std::invalid_argument("ancestor_at: stage out of range");
  while (time(v) > t) v = parent(v);
  return v;
}

std::vector<NodeId> ScenarioTree::path_to(NodeId v) const {
  std::vector<NodeId> path;
  for (; v != kNoNode; v = parent(v)) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

ScenarioTree make_path_tree(int horizon) {
  std::vector<Node> nodes;
  for (int t = 0; t <= horizon; ++t) {
    nodes.push_back({t, t, t == 0 ? std::nullopt : std::optional<NodeId>(t - 1), Rational(1)});
  }
  return ScenarioTree(std::move(nodes));
}

ScenarioTree make_uniform_tree(int horizon, std::span<const Rational> branch_probs) {
  std::vector<Node> nodes{{0, 0, std::nullopt, Rational(1)}};
  std::vector<NodeId> frontier{0};
  for (int t = 1; t <= horizon; ++t) {
    std::vector<NodeId> next;
    for (const NodeId p : frontier) {
      for (const Rational& q : branch_probs) {
        const auto id = static_cast<NodeId>(nodes.size());
        nodes.push_back({id, t, p, q});
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
  return ScenarioTree(std::move(nodes));
}

void require_total(const ScenarioTree& tree, const AdaptedProcess& process) {
  if (process.size() != tree.size()) {
    throw std::invalid_argument("process has " + std::to_string(process.size()) +
                                " values but the tree has " + std::to_string(tree.size()) + " nodes");
  }
}

bool StoppingRule::stops_at(NodeId v) const { return std::binary_search(stops_.begin(), stops_.end(), v); }

StoppingRule canonicalize_rule(const ScenarioTree& tree, std::span<const NodeId> flags) {
  std::vector<bool> flagged(tree.size(), false);
  for (const NodeId v : flags) {
    if (!tree.contains(v)) throw std::invalid_argument("unknown node id " + std::to_string(v));
    flagged[v] = true;
  }
  // covered[v]: some node on root..v is flagged.
  std::vector<bool> covered(tree.size(), false);
  std::vector<NodeId> kept;
  for (int t = 0; t <= tree.horizon(); ++t) {
    for (const NodeId v : tree.nodes_at(t)) {
      const NodeId p = tree.parent(v);
      const bool above = p != kNoNode && covered[p];
      if (flagged[v] && !above) kept.push_back(v);
      covered[v] = above || flagged[v];
    }
  }
  std::sort(kept.begin(), kept.end());
  return StoppingRule(std::move(kept));
}

StoppingRule min_of_rules(const ScenarioTree& tree, std::span<const StoppingRule> rules) {
  if (rules.empty()) throw std::invalid_argument("min_of_rules: empty rule list");
  std::vector<NodeId> all;
  for (const StoppingRule& r : rules) all.insert(all.end(), r.stops().begin(), r.stops().end());
  return canonicalize_rule(tree, all);
}

StoppingRule stop_at_stage(const ScenarioTree& tree, int t) {
  if (t < 0 || t > tree.horizon()) throw std::invalid_argument("stop_at_stage: stage out of range");
  return canonicalize_rule(tree, tree.nodes_at(t));
}

StoppingRule cap_at_horizon(const ScenarioTree& tree, const StoppingRule& rule) {
  const StoppingRule at_t = stop_at_stage(tree, tree.horizon());
  const StoppingRule both[] = {rule, at_t};
  return min_of_rules(tree, both);
}

std::vector<NodeId> stop_node_index(const ScenarioTree& tree, const StoppingRule& rule) {
  for (const NodeId v : rule.stops()) {
    if (!tree.contains(v)) throw std::invalid_argument("rule references unknown node " + std::to_string(v));
  }
  std::vector<NodeId> index(tree.size(), kNoNode);
  for (int t = 0; t <= tree.horizon(); ++t) {
    for (const NodeId v : tree.nodes_at(t)) {
      const NodeId p = tree.parent(v);
      const NodeId above = p == kNoNode ? kNoNode : index[p];
      if (rule.stops_at(v)) {
        if (above != kNoNode) throw std::invalid_argument("rule is not an antichain on this tree");
        index[v] = v;
      } else {
        index[v] = above;
      }
    }
  }
  return index;
}

Stage rule_value(const ScenarioTree& tree, const StoppingRule& rule, NodeId leaf) {
  for (NodeId v = leaf; v != kNoNode; v = tree.parent(v)) {
    if (rule.stops_at(v)) return Stage(tree.time(v));
  }
  return Stage::never();
}

std::vector<Stage> path_values(const ScenarioTree& tree, const StoppingRule& rule) {
  const auto index = stop_node_index(tree, rule);
  std::vector<Stage> out;
  out.reserve(tree.leaves().size());
  for (const NodeId leaf : tree.leaves()) {
    out.push_back(index[leaf] == kNoNode ? Stage::never() : Stage(tree.time(index[leaf])));
  }
  return out;
}

Rational one_step_expectation(const ScenarioTree& tree, const AdaptedProcess& process, NodeId node) {
  require_total(tree, process);
  if (!tree.contains(node)) throw std::invalid_argument("unknown node id " + std::to_string(node));
  if (tree.is_leaf(node)) throw std::invalid_argument("no successor stage at leaf " + std::to_string(node));
  Rational sum;
  for (const NodeId c : tree.children(node)) sum += tree.branch_prob(c) * process[c];
  return sum;
}

Rational expectation_under_rule(const ScenarioTree& tree, const AdaptedProcess& process,
                                const StoppingRule& rule) {
  require_total(tree, process);
  const auto index = stop_node_index(tree, rule);
  Rational sum;
  for (const NodeId leaf : tree.leaves()) {
    const NodeId at = index[leaf] == kNoNode ? leaf : index[leaf];
    sum += tree.path_probability(leaf) * process[at];
  }
  return sum;
}

}  // namespace dynkin
