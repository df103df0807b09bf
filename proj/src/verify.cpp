#include "dynkin/verify.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "dynkin/errors.hpp"
#include "dynkin/snell.hpp"

namespace dynkin {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

// Antichains of the subtree at v = {v} plus one choice per child subtree.
std::uint64_t count_at(const ScenarioTree& tree, NodeId v) {
  std::uint64_t product = 1;
  for (const NodeId c : tree.children(v)) product = saturating_mul(product, count_at(tree, c));
  return saturating_add(product, 1);
}

std::vector<std::vector<NodeId>> antichains_at(const ScenarioTree& tree, NodeId v) {
  std::vector<std::vector<NodeId>> combos{{}};
  for (const NodeId c : tree.children(v)) {
    const auto sub = antichains_at(tree, c);
    std::vector<std::vector<NodeId>> next;
    next.reserve(combos.size() * sub.size());
    for (const auto& left : combos) {
      for (const auto& right : sub) {
        auto merged = left;
        merged.insert(merged.end(), right.begin(), right.end());
        next.push_back(std::move(merged));
      }
    }
    combos = std::move(next);
  }
  combos.push_back({v});
  return combos;
}

std::string stage_pair(Stage a, Stage b) { return a.str() + " vs " + b.str(); }

}  // namespace

std::uint64_t count_rules(const ScenarioTree& tree) { return count_at(tree, tree.root()); }

std::vector<StoppingRule> enumerate_rules(const ScenarioTree& tree, std::uint64_t cap) {
  const std::uint64_t count = count_rules(tree);
  if (count > cap) {
    throw CapExceededError("rule enumeration needs " +
                           (count == kSaturated ? std::string("more than 2^64") : std::to_string(count)) +
                           " rules, cap is " + std::to_string(cap));
  }
  std::vector<StoppingRule> out;
  out.reserve(count);
  for (const auto& chain : antichains_at(tree, tree.root())) out.push_back(canonicalize_rule(tree, chain));
  return out;
}

AdaptedProcess deviation_reward(const GameSpec& spec, const StrategyProfile& profile, int player) {
  const ScenarioTree& tree = spec.tree();
  if (static_cast<int>(profile.rules.size()) != spec.num_players()) throw std::invalid_argument("profile size");
  std::vector<StoppingRule> others;
  for (int j = 1; j <= spec.num_players(); ++j) {
    if (j != player) others.push_back(profile.rule(j));
  }
  const StoppingRule first = min_of_rules(tree, others);
  const auto index = stop_node_index(tree, first);
  const AdaptedProcess& alone = spec.payoff(player, Coalition::singleton(player));

  std::vector<Rational> values(tree.size());
  for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
    const NodeId u = index[v];
    if (u == kNoNode) {
      values[v] = alone[v];
      continue;
    }
    std::vector<int> members;
    for (int j = 1; j <= spec.num_players(); ++j) {
      if (j != player && profile.rule(j).stops_at(u)) members.push_back(j);
    }
    const Coalition stopped = Coalition::from_members(members, spec.num_players());
    values[v] = u == v ? spec.payoff(player, stopped.with(player), u) : spec.payoff(player, stopped, u);
  }
  return AdaptedProcess(std::move(values));
}

BestResponse best_response_value(const GameSpec& spec, const StrategyProfile& profile, int player,
                                 std::uint64_t enumeration_cap) {
  const ScenarioTree& tree = spec.tree();
  const AdaptedProcess reward = deviation_reward(spec, profile, player);
  SnellResult snell = solve_stopping(tree, reward, Rational(0));
  BestResponse out{snell.value, std::move(snell.eps_rule), std::nullopt};
  if (enumeration_cap > 0 && count_rules(tree) <= enumeration_cap) {
    std::optional<Rational> best;
    StrategyProfile deviated = profile;
    for (const StoppingRule& r : enumerate_rules(tree, enumeration_cap)) {
      deviated.rules[player - 1] = r;
      Rational v = expected_payoffs(spec, deviated)[player - 1];
      if (!best || v > *best) best = std::move(v);
    }
    if (*best != out.value) {
      throw std::logic_error("best response mismatch for player " + std::to_string(player) + ": Snell " +
                             out.value.str() + ", enumeration " + best->str());
    }
    out.enumerated = best;
  }
  return out;
}

NepCertificate certify(const GameSpec& spec, const StrategyProfile& profile, const Rational& epsilon,
                       std::uint64_t enumeration_cap) {
  if (epsilon.sign() < 0) throw std::invalid_argument("epsilon must be non-negative");
  NepCertificate cert;
  cert.epsilon = epsilon;
  cert.achieved = expected_payoffs(spec, profile);
  cert.is_eps_nep = true;
  for (int i = 1; i <= spec.num_players(); ++i) {
    BestResponse br = best_response_value(spec, profile, i, enumeration_cap);
    Rational gain = br.value - cert.achieved[i - 1];
    if (gain.sign() < 0) throw std::logic_error("negative deviation gain for player " + std::to_string(i));
    if (gain > epsilon) cert.is_eps_nep = false;
    cert.best_response.push_back(std::move(br.value));
    cert.gains.push_back(std::move(gain));
  }
  return cert;
}

std::vector<std::pair<StrategyProfile, NepCertificate>> find_all_eps_neps(const GameSpec& spec,
                                                                          const Rational& epsilon,
                                                                          std::uint64_t rule_cap,
                                                                          std::uint64_t profile_cap) {
  const auto rules = enumerate_rules(spec.tree(), rule_cap);
  const int n = spec.num_players();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total = saturating_mul(total, rules.size());
  if (total > profile_cap) {
    throw CapExceededError("profile enumeration needs " + std::to_string(total) + " profiles, cap is " +
                           std::to_string(profile_cap));
  }
  std::vector<std::pair<StrategyProfile, NepCertificate>> out;
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  StrategyProfile profile;
  profile.rules.assign(static_cast<std::size_t>(n), rules.front());
  for (std::uint64_t k = 0; k < total; ++k) {
    for (int i = 0; i < n; ++i) profile.rules[i] = rules[digits[i]];
    NepCertificate cert = certify(spec, profile, epsilon);
    if (cert.is_eps_nep) out.emplace_back(profile, std::move(cert));
    for (int i = n - 1; i >= 0; --i) {
      if (++digits[i] < rules.size()) break;
      digits[i] = 0;
    }
  }
  return out;
}

std::string TraceViolation::str() const {
  return invariant + " at step " + std::to_string(step) + ", leaf " + std::to_string(leaf) + ": " + detail;
}

std::vector<TraceViolation> check_trace_invariants(const ScenarioTree& tree, const std::vector<SchemeStep>& trace,
                                                   const EquilibriumProfile& profile) {
  std::vector<TraceViolation> out;
  const int n_players = static_cast<int>(profile.initial_taus.size());
  const Stage limit = profile.init == Initialization::kNever ? Stage::never() : Stage(tree.horizon());
  const auto leaves = tree.leaves();

  struct Values {
    std::vector<Stage> theta, mu, tau;
  };
  std::map<int, Values> by_n;
  std::map<int, std::vector<Stage>> tau_of;  // includes τ_1..τ_N
  for (int k = 0; k < n_players; ++k) tau_of[k + 1] = path_values(tree, profile.initial_taus[k].second);
  for (const SchemeStep& s : trace) {
    Values v{path_values(tree, s.theta), path_values(tree, s.mu), path_values(tree, s.tau)};
    tau_of[s.n] = v.tau;
    by_n.emplace(s.n, std::move(v));
  }

  auto report = [&](const char* name, int n, std::size_t leaf_index, std::string detail) {
    out.push_back({name, n, leaves[leaf_index], std::move(detail)});
  };

  for (const auto& [n, v] : by_n) {
    std::vector<StoppingRule> prev;
    for (int k = n - n_players + 1; k <= n - 1; ++k) {
      const auto it = std::find_if(trace.begin(), trace.end(), [k](const SchemeStep& s) { return s.n == k; });
      prev.push_back(it != trace.end() ? it->tau : profile.initial_taus[k - 1].second);
    }
    const auto expected_theta = path_values(tree, min_of_rules(tree, prev));

    const auto own_prev = tau_of.find(n - n_players);
    const auto earlier = by_n.find(n - n_players);
    const auto later = by_n.find(n + n_players);
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      if (v.theta[k] != expected_theta[k]) report("theta_min", n, k, stage_pair(v.theta[k], expected_theta[k]));
      if (own_prev != tau_of.end() && v.tau[k] > own_prev->second[k]) {
        report("monotonicity", n, k, "tau " + stage_pair(v.tau[k], own_prev->second[k]));
      }
      if (earlier != by_n.end()) {
        if (v.theta[k] > earlier->second.theta[k]) {
          report("monotonicity", n, k, "theta " + stage_pair(v.theta[k], earlier->second.theta[k]));
        }
        if (v.mu[k] > earlier->second.mu[k]) {
          report("monotonicity", n, k, "mu " + stage_pair(v.mu[k], earlier->second.mu[k]));
        }
      }
      const Stage meet = std::min(v.tau[k], v.theta[k]);
      if (v.mu[k] != meet) report("lattice", n, k, "mu " + v.mu[k].str() + " but tau ^ theta " + meet.str());
      if (v.tau[k] == v.theta[k] && v.tau[k] < limit) {
        report("no_coincidence", n, k, "tau = theta = " + v.tau[k].str());
      }
      if (later != by_n.end()) {
        if (later->second.mu[k] > v.tau[k]) {
          report("domination", n, k, "mu_{n+N} " + stage_pair(later->second.mu[k], v.tau[k]));
        }
        if (later->second.mu[k] == v.mu[k] && later->second.tau[k] != v.tau[k]) {
          report("stationarity", n, k, "mu stationary but tau " + stage_pair(v.tau[k], later->second.tau[k]));
        }
      }
    }
  }

  if (static_cast<int>(profile.uncapped.rules.size()) == n_players) {
    std::vector<std::vector<Stage>> limits;
    for (const auto& r : profile.uncapped.rules) limits.push_back(path_values(tree, r));
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      Stage r = Stage::never();
      for (const auto& l : limits) r = std::min(r, l[k]);
      if (!(r < limit)) continue;
      int attaining = 0;
      for (const auto& l : limits) attaining += l[k] == r ? 1 : 0;
      if (attaining != 1) {
        report("singleton_coalition", 0, k, std::to_string(attaining) + " players stop at R* = " + r.str());
      }
    }
  }

  const long bound = static_cast<long>(n_players) * static_cast<long>(leaves.size()) * (tree.horizon() + 1) + 1;
  if (profile.rounds_used > bound) {
    out.push_back({"termination", 0, kNoNode,
                   "rounds_used " + std::to_string(profile.rounds_used) + " exceeds " + std::to_string(bound)});
  }
  return out;
}

}  // namespace dynkin
