#include <gtest/gtest.h>

#include <algorithm>
#include <stdexcept>

#include "dynkin/errors.hpp"
#include "dynkin/tree.hpp"
#include "support.hpp"

namespace dynkin {
namespace {

using namespace literals;
using testing::Rng;

ScenarioTree binary(int horizon) {
  const std::vector<Rational> half{"1/2"_q, "1/2"_q};
  return make_uniform_tree(horizon, half);
}

ScenarioTree skewed_binary() {
  // root 0, children 1 (1/4) and 2 (3/4)
  return ScenarioTree({{0, 0, std::nullopt, 1}, {1, 1, 0, "1/4"_q}, {2, 1, 0, "3/4"_q}});
}

bool has_rule(const std::vector<TreeViolation>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const TreeViolation& t) { return t.rule.find(needle) != std::string::npos; });
}

TEST(ValidateTree, SinglePathIsValid) {
  const std::vector<Node> nodes{{0, 0, std::nullopt, 1}, {1, 1, 0, 1}, {2, 2, 1, 1}};
  EXPECT_TRUE(validate_tree(nodes).empty());
}

TEST(ValidateTree, SiblingsNotSummingToOne) {
  const std::vector<Node> nodes{{0, 0, std::nullopt, 1}, {1, 1, 0, "1/2"_q}, {2, 1, 0, "1/3"_q}};
  const auto v = validate_tree(nodes);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].node, 0);
  EXPECT_NE(v[0].rule.find("sum"), std::string::npos);
}

TEST(ValidateTree, FourLevelHalfHalfBinaryIsValid) {
  const ScenarioTree tree = binary(3);
  EXPECT_EQ(tree.size(), 15u);
  EXPECT_TRUE(validate_tree(tree.nodes()).empty());
}

TEST(ValidateTree, StructuralViolations) {
  EXPECT_TRUE(has_rule(validate_tree(std::vector<Node>{}), "no nodes"));
  // ragged: leaf 1 at time 1 while leaf 3 at time 2
  const std::vector<Node> ragged{{0, 0, std::nullopt, 1}, {1, 1, 0, "1/2"_q}, {2, 1, 0, "1/2"_q}, {3, 2, 2, 1}};
  EXPECT_TRUE(has_rule(validate_tree(ragged), "horizon"));
  const std::vector<Node> time_skip{{0, 0, std::nullopt, 1}, {1, 2, 0, 1}};
  EXPECT_FALSE(validate_tree(time_skip).empty());
  const std::vector<Node> two_roots{{0, 0, std::nullopt, 1}, {1, 0, std::nullopt, 1}};
  EXPECT_TRUE(has_rule(validate_tree(two_roots), "root"));
  const std::vector<Node> dup{{0, 0, std::nullopt, 1}, {0, 1, 0, 1}};
  EXPECT_FALSE(validate_tree(dup).empty());
  const std::vector<Node> bad_parent{{0, 0, std::nullopt, 1}, {1, 1, 7, 1}};
  EXPECT_FALSE(validate_tree(bad_parent).empty());
  const std::vector<Node> zero_prob{{0, 0, std::nullopt, 1}, {1, 1, 0, 0}, {2, 1, 0, 1}};
  EXPECT_FALSE(validate_tree(zero_prob).empty());
  const std::vector<Node> gap{{0, 0, std::nullopt, 1}, {2, 1, 0, 1}};
  EXPECT_FALSE(validate_tree(gap).empty());
}

TEST(ScenarioTree, ConstructorRejectsInvalidTree) {
  try {
    ScenarioTree({{0, 0, std::nullopt, 1}, {1, 1, 0, "1/2"_q}, {2, 1, 0, "1/3"_q}});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.details().size(), 1u);
  }
}

TEST(ScenarioTree, Accessors) {
  const ScenarioTree tree = binary(2);
  EXPECT_EQ(tree.horizon(), 2);
  EXPECT_EQ(tree.root(), 0);
  EXPECT_EQ(tree.leaves().size(), 4u);
  EXPECT_EQ(tree.nodes_at(1).size(), 2u);
  for (const NodeId leaf : tree.leaves()) {
    EXPECT_TRUE(tree.is_leaf(leaf));
    EXPECT_EQ(tree.path_probability(leaf), "1/4"_q);
    const auto path = tree.path_to(leaf);
    ASSERT_EQ(path.size(), 3u);
    EXPECT_EQ(path.front(), 0);
    EXPECT_EQ(tree.ancestor_at(leaf, 1), path[1]);
    EXPECT_TRUE(tree.is_ancestor_or_self(path[1], leaf));
    EXPECT_TRUE(tree.is_ancestor_or_self(leaf, leaf));
    EXPECT_FALSE(tree.is_ancestor_or_self(leaf, path[1]));
  }
}

TEST(ScenarioTree, LeafProbabilitiesSumToOneOnRandomTrees) {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const ScenarioTree tree = testing::random_tree(rng);
    ASSERT_LE(tree.size(), 12u);
    Rational total;
    for (const NodeId leaf : tree.leaves()) {
      EXPECT_EQ(tree.path_probability(leaf), testing::oracle_path_probability(tree, leaf));
      total += tree.path_probability(leaf);
    }
    EXPECT_EQ(total, Rational(1));
  }
}

TEST(OneStepExpectation, Examples) {
  const ScenarioTree path = make_path_tree(2);
  EXPECT_EQ(one_step_expectation(path, AdaptedProcess({"1/8"_q, "1/2"_q, 0}), 0), "1/2"_q);

  const ScenarioTree half = binary(1);
  EXPECT_EQ(one_step_expectation(half, AdaptedProcess({0, 1, "1/2"_q}), 0), "3/4"_q);

  const ScenarioTree skew = skewed_binary();
  EXPECT_EQ(one_step_expectation(skew, AdaptedProcess({5, 0, 1}), 0), "3/4"_q);
}

TEST(OneStepExpectation, LeafThrows) {
  const ScenarioTree path = make_path_tree(1);
  try {
    one_step_expectation(path, AdaptedProcess({0, 0}), 1);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("no successor stage"), std::string::npos);
  }
}

TEST(ExpectationUnderRule, Examples) {
  const ScenarioTree path = make_path_tree(2);
  const AdaptedProcess x({"1/8"_q, "1/2"_q, 0});
  EXPECT_EQ(expectation_under_rule(path, x, stop_at_stage(path, 0)), "1/8"_q);
  EXPECT_EQ(expectation_under_rule(path, x, stop_at_stage(path, 1)), "1/2"_q);

  const ScenarioTree half = binary(1);
  EXPECT_EQ(expectation_under_rule(half, AdaptedProcess({7, 1, 0}), StoppingRule::never()), "1/2"_q);
}

TEST(ExpectationUnderRule, MismatchedProcessThrows) {
  const ScenarioTree path = make_path_tree(2);
  EXPECT_THROW(expectation_under_rule(path, AdaptedProcess({0, 0}), StoppingRule::never()), std::invalid_argument);
  const ScenarioTree bigger = binary(2);
  const std::vector<NodeId> far{6};
  EXPECT_THROW(expectation_under_rule(path, AdaptedProcess({0, 0, 0}), canonicalize_rule(bigger, far)),
               std::invalid_argument);
}

TEST(ExpectationUnderRule, MatchesPathOracleOnRandomTrees) {
  Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    const ScenarioTree tree = testing::random_tree(rng);
    const AdaptedProcess x = testing::random_process(rng, tree);
    const auto chains = testing::oracle_antichains(tree);
    const auto& chain = chains[static_cast<std::size_t>(testing::uniform_int(rng, 0, static_cast<int>(chains.size()) - 1))];
    const std::vector<NodeId> flags(chain.begin(), chain.end());
    EXPECT_EQ(expectation_under_rule(tree, x, canonicalize_rule(tree, flags)),
              testing::oracle_expectation(tree, x, chain));
  }
}

TEST(CanonicalizeRule, Examples) {
  const ScenarioTree tree = binary(2);  // 0; 1,2; 3,4 under 1; 5,6 under 2
  const std::vector<NodeId> root_and_leaf{0, 5};
  EXPECT_EQ(canonicalize_rule(tree, root_and_leaf), stop_at_stage(tree, 0));

  const std::vector<NodeId> antichain{3, 2};
  const StoppingRule r = canonicalize_rule(tree, antichain);
  EXPECT_EQ(std::vector<NodeId>(r.stops().begin(), r.stops().end()), (std::vector<NodeId>{2, 3}));

  const std::vector<NodeId> with_child{1, 3, 5};
  const StoppingRule pruned = canonicalize_rule(tree, with_child);
  EXPECT_EQ(std::vector<NodeId>(pruned.stops().begin(), pruned.stops().end()), (std::vector<NodeId>{1, 5}));

  const std::vector<NodeId> unknown{42};
  EXPECT_THROW(canonicalize_rule(tree, unknown), std::invalid_argument);
}

TEST(CanonicalizeRule, IdempotentAndPreservesFirstStop) {
  Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    const ScenarioTree tree = testing::random_tree(rng);
    std::vector<NodeId> flags;
    for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
      if (testing::uniform_int(rng, 0, 3) == 0) flags.push_back(v);
    }
    const StoppingRule once = canonicalize_rule(tree, flags);
    const std::vector<NodeId> again(once.stops().begin(), once.stops().end());
    EXPECT_EQ(canonicalize_rule(tree, again), once);
    std::size_t idx = 0;
    for (const NodeId leaf : tree.leaves()) {
      Stage first = Stage::never();
      for (const NodeId v : testing::oracle_path(tree, leaf)) {
        if (std::find(flags.begin(), flags.end(), v) != flags.end()) {
          first = Stage(tree.time(v));
          break;
        }
      }
      EXPECT_EQ(path_values(tree, once)[idx++], first);
    }
  }
}

TEST(MinOfRules, Examples) {
  const ScenarioTree tree = binary(2);
  const std::vector<StoppingRule> with_never{StoppingRule::never(), stop_at_stage(tree, 1)};
  EXPECT_EQ(min_of_rules(tree, with_never), stop_at_stage(tree, 1));
  const std::vector<NodeId> leafy{4, 2};
  const std::vector<StoppingRule> with_root{canonicalize_rule(tree, leafy), stop_at_stage(tree, 0)};
  EXPECT_EQ(min_of_rules(tree, with_root), stop_at_stage(tree, 0));

  const ScenarioTree path = make_path_tree(3);
  const std::vector<StoppingRule> two_one{stop_at_stage(path, 2), stop_at_stage(path, 1)};
  EXPECT_EQ(min_of_rules(path, two_one), stop_at_stage(path, 1));

  EXPECT_THROW(min_of_rules(tree, std::span<const StoppingRule>{}), std::invalid_argument);
}

StoppingRule random_rule(Rng& rng, const ScenarioTree& tree) {
  std::vector<NodeId> flags;
  for (NodeId v = 0; v < static_cast<NodeId>(tree.size()); ++v) {
    if (testing::uniform_int(rng, 0, 4) == 0) flags.push_back(v);
  }
  return canonicalize_rule(tree, flags);
}

TEST(MinOfRules, LatticeLawsPathwise) {
  Rng rng(14);
  for (int k = 0; k < 200; ++k) {
    const ScenarioTree tree = testing::random_tree(rng);
    const StoppingRule a = random_rule(rng, tree), b = random_rule(rng, tree), c = random_rule(rng, tree);
    auto mn = [&](const StoppingRule& x, const StoppingRule& y) {
      const std::vector<StoppingRule> v{x, y};
      return min_of_rules(tree, v);
    };
    EXPECT_EQ(mn(a, b), mn(b, a));
    EXPECT_EQ(mn(mn(a, b), c), mn(a, mn(b, c)));
    EXPECT_EQ(mn(a, StoppingRule::never()), a);
    const auto pa = path_values(tree, a), pb = path_values(tree, b), pm = path_values(tree, mn(a, b));
    for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pm[i], std::min(pa[i], pb[i]));
  }
}

TEST(StoppingRules, HorizonCapAndValues) {
  const ScenarioTree tree = binary(2);
  const std::vector<NodeId> left{1};
  const StoppingRule r = canonicalize_rule(tree, left);
  const auto before = path_values(tree, r);
  EXPECT_EQ(before[0], Stage(1));
  EXPECT_TRUE(before[3].is_never());
  const auto capped = path_values(tree, cap_at_horizon(tree, r));
  EXPECT_EQ(capped[0], Stage(1));
  EXPECT_EQ(capped[3], Stage(2));
  EXPECT_TRUE(r.stops_at(1));
  EXPECT_FALSE(r.stops_at(3));
  EXPECT_LT(Stage(3), Stage::never());
  EXPECT_EQ(Stage::never().str(), "never");
}

TEST(StopNodeIndex, FindsAncestorStop) {
  const ScenarioTree tree = binary(2);
  const std::vector<NodeId> flags{1, 6};
  const auto idx = stop_node_index(tree, canonicalize_rule(tree, flags));
  EXPECT_EQ(idx[0], kNoNode);
  EXPECT_EQ(idx[1], 1);
  EXPECT_EQ(idx[3], 1);
  EXPECT_EQ(idx[2], kNoNode);
  EXPECT_EQ(idx[5], kNoNode);
  EXPECT_EQ(idx[6], 6);
}

}  // namespace
}  // namespace dynkin
