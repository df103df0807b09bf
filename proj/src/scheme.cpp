#include "dynkin/scheme.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <string>

#include "dynkin/snell.hpp"

namespace dynkin {

StoppingRule rule_from_path_values(const ScenarioTree& tree, std::span<const Stage> values) {
  const auto leaves = tree.leaves();
  if (values.size() != leaves.size()) throw std::invalid_argument("one value per leaf required");
  std::vector<NodeId> flags;
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (!values[k].is_never()) flags.push_back(tree.ancestor_at(leaves[k], values[k].value()));
  }
  StoppingRule rule = canonicalize_rule(tree, flags);
  if (path_values(tree, rule) != std::vector<Stage>(values.begin(), values.end())) {
    throw std::logic_error("path values do not define a stopping time");
  }
  return rule;
}

StageReward build_stage_reward(const GameSpec& spec, int player, const StoppingRule& theta,
                               std::span<const PlayerRule> prev_taus) {
  const ScenarioTree& tree = spec.tree();
  std::vector<StoppingRule> others;
  for (const auto& [p, rule] : prev_taus) {
    if (p == player) throw std::invalid_argument("previous rules must belong to the other players");
    others.push_back(rule);
  }
  if (others.empty()) throw std::invalid_argument("build_stage_reward: no previous rules");
  if (min_of_rules(tree, others) != theta) throw std::invalid_argument("theta is not the minimum of the previous rules");

  const Coalition self = Coalition::singleton(player);
  const AdaptedProcess& alone = spec.payoff(player, self);
  StageReward out;
  for (const NodeId u : theta.stops()) {
    std::vector<int> members;
    for (const auto& [p, rule] : prev_taus) {
      if (rule.stops_at(u)) members.push_back(p);
    }
    std::sort(members.begin(), members.end());
    out.coalitions.emplace(u, Coalition::from_members(members, spec.num_players()));
  }

  const auto index = stop_node_index(tree, theta);
  std::vector<Rational> values(tree.size());
  std::map<NodeId, Rational> frozen;
  for (const auto& [u, coalition] : out.coalitions) {
    frozen.emplace(u, max(spec.payoff(player, coalition.with(player), u), spec.payoff(player, coalition, u)));
  }
  for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
    values[v] = index[v] == kNoNode ? alone[v] : frozen.at(index[v]);
  }
  out.reward = AdaptedProcess(std::move(values));
  return out;
}

std::vector<int> resolve_order(const GameSpec& spec, const SchemeConfig& config) {
  const int n = spec.num_players();
  if (config.epsilon.sign() < 0) throw std::invalid_argument("epsilon must be non-negative");
  if (config.order.empty()) {
    std::vector<int> identity(static_cast<std::size_t>(n));
    std::iota(identity.begin(), identity.end(), 1);
    return identity;
  }
  std::vector<int> sorted = config.order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 1);
  if (sorted != identity) throw std::invalid_argument("order must be a permutation of 1.." + std::to_string(n));
  return config.order;
}

SchemeState initial_state(const GameSpec& spec, const SchemeConfig& config) {
  const auto order = resolve_order(spec, config);
  SchemeState state;
  state.next_n = spec.num_players() + 1;
  const StoppingRule start = config.init == Initialization::kNever
                                 ? StoppingRule::never()
                                 : stop_at_stage(spec.tree(), spec.horizon());
  for (const int p : order) state.recent.emplace_back(p, start);
  return state;
}

SchemeStep scheme_step(const GameSpec& spec, const SchemeConfig& config, const SchemeState& state) {
  const ScenarioTree& tree = spec.tree();
  const int n_players = spec.num_players();
  if (static_cast<int>(state.recent.size()) != n_players) throw std::invalid_argument("state must hold N rules");

  SchemeStep step;
  step.n = state.next_n;
  // n = N q + i with i in 1..N; the player is the one visited at position i.
  step.player = state.recent.front().first;

  const std::vector<PlayerRule> prev(state.recent.begin() + 1, state.recent.end());
  std::vector<StoppingRule> prev_rules;
  for (const auto& pr : prev) prev_rules.push_back(pr.second);
  step.theta = min_of_rules(tree, prev_rules);

  StageReward stage = build_stage_reward(spec, step.player, step.theta, prev);
  step.coalition_at_theta = std::move(stage.coalitions);
  step.stage_reward = std::move(stage.reward);
  step.envelope = snell_envelope(tree, step.stage_reward);
  step.mu = eps_optimal_rule(tree, step.stage_reward, step.envelope, config.epsilon);

  const StoppingRule& own_prev = state.recent.front().second;
  const auto mu = path_values(tree, step.mu);
  const auto theta = path_values(tree, step.theta);
  const auto prior = path_values(tree, own_prev);
  std::vector<Stage> tau(mu.size(), Stage::never());
  for (std::size_t k = 0; k < mu.size(); ++k) tau[k] = mu[k] < theta[k] ? mu[k] : prior[k];
#ifndef NDEBUG
  // The unsimplified update: (μ ∧ τ_{n-N}) where that is before θ, else τ_{n-N}.
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const Stage m = std::min(mu[k], prior[k]);
    const Stage raw = m < theta[k] ? m : prior[k];
    assert(raw == tau[k] && "simplified and raw tau updates disagree");
  }
#endif
  step.tau = rule_from_path_values(tree, tau);
  return step;
}

SchemeState advance(const SchemeState& state, const SchemeStep& step) {
  SchemeState next = state;
  next.recent.pop_front();
  next.recent.emplace_back(step.player, step.tau);
  next.next_n = step.n + 1;
  return next;
}

long termination_bound(const GameSpec& spec) {
  return static_cast<long>(spec.num_players()) * static_cast<long>(spec.tree().leaves().size()) *
             (spec.horizon() + 1) +
         1;
}

EquilibriumProfile run_scheme(const GameSpec& spec, const SchemeConfig& config) {
  const int n_players = spec.num_players();
  EquilibriumProfile out;
  out.order = resolve_order(spec, config);
  out.epsilon = config.epsilon;
  out.init = config.init;
  const long max_rounds = config.max_rounds > 0 ? config.max_rounds : termination_bound(spec);

  SchemeState state = initial_state(spec, config);
  out.initial_taus.assign(state.recent.begin(), state.recent.end());
  int unchanged = 0;
  long steps = 0;
  while (unchanged < n_players) {
    if (steps >= max_rounds * n_players) {
      throw NonConvergenceError("scheme did not converge within " + std::to_string(max_rounds) + " rounds",
                                std::move(out.trace));
    }
    SchemeStep step = scheme_step(spec, config, state);
    unchanged = step.tau == state.recent.front().second ? unchanged + 1 : 0;
    state = advance(state, step);
    out.trace.push_back(std::move(step));
    ++steps;
  }
  out.rounds_used = static_cast<int>((steps + n_players - 1) / n_players);

  out.uncapped.rules.resize(static_cast<std::size_t>(n_players));
  for (const auto& [p, rule] : state.recent) out.uncapped.rules[p - 1] = rule;
  out.capped = cap_profile(spec.tree(), out.uncapped);
  out.termination_rule = min_of_rules(spec.tree(), out.uncapped.rules);
  return out;
}

}  // namespace dynkin
