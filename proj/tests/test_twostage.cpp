// Copyright 2026 The treepart Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "treepart/bnb.hpp"
#include "treepart/error.hpp"
#include "treepart/synth.hpp"
#include "treepart/twostage.hpp"

namespace treepart {
namespace {

using testing::groups_of;
using testing::make_network;

ReducedGraph multigraph(int k, const std::vector<std::tuple<int, int, double>>& edges) {
  ReducedGraph rg;
  rg.k = k;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    rg.edges.push_back({std::get<0>(edges[e]), std::get<1>(edges[e]), static_cast<LineId>(e),
                        std::get<2>(edges[e])});
  }
  return rg;
}

double weight_of(const ReducedGraph& rg, const std::vector<LineId>& ids) {
  double w = 0.0;
  for (LineId id : ids) w += rg.edges[id].weight;
  return w;
}

TEST(MaxSpanningTree, KeepsHeaviestParallelEdge) {
  const ReducedGraph rg = multigraph(2, {{0, 1, 5}, {0, 1, 3}, {0, 1, 2}});
  const SpanningTreeSplit s = max_weight_spanning_tree(rg);
  EXPECT_EQ(s.retained, (std::vector<LineId>{0}));
  EXPECT_EQ(s.switched, (std::vector<LineId>{1, 2}));
  EXPECT_DOUBLE_EQ(weight_of(rg, s.switched), 5.0);
}

TEST(MaxSpanningTree, TreeNeedsNoSwitching) {
  const ReducedGraph rg = multigraph(4, {{0, 1, 1}, {1, 2, 7}, {1, 3, 2}});
  EXPECT_TRUE(max_weight_spanning_tree(rg).switched.empty());
}

TEST(MaxSpanningTree, EqualWeightsPreferLowerLineId) {
  const ReducedGraph rg = multigraph(2, {{0, 1, 4}, {0, 1, 4}});
  EXPECT_EQ(max_weight_spanning_tree(rg).retained, (std::vector<LineId>{0}));
}

TEST(MaxSpanningTree, DisconnectedIsInfeasible) {
  EXPECT_THROW(max_weight_spanning_tree(multigraph(3, {{0, 1, 1}})), InfeasibleError);
}

TEST(MaxSpanningTree, MatchesBruteForceOnRandomMultigraphs) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const int m = k - 1 + static_cast<int>(rng() % (9 - k));
    std::vector<std::tuple<int, int, double>> edges;
    for (int c = 1; c < k; ++c) edges.emplace_back(static_cast<int>(rng() % c), c, 0.0);
    while (static_cast<int>(edges.size()) < m) {
      int a = static_cast<int>(rng() % k), b = static_cast<int>(rng() % k);
      if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b), 0.0);
    }
    for (auto& e : edges) std::get<2>(e) = static_cast<double>(rng() % 20);
    const ReducedGraph rg = multigraph(k, edges);
    const SpanningTreeSplit s = max_weight_spanning_tree(rg);
    ASSERT_EQ(static_cast<int>(s.retained.size()), k - 1);
    ASSERT_DOUBLE_EQ(weight_of(rg, s.switched), testing::brute_force_switched(rg));
  }
}

TEST(ConstrainedSpectral, TwoCliquesSplitAlongTheirLink) {
  std::vector<std::tuple<int, int, double>> edges;
  for (int base : {0, 4}) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) edges.emplace_back(base + i, base + j, 20.0 + i + j);
    }
  }
  edges.emplace_back(3, 4, 1.0);
  const Network net = make_network(8, edges);
  const Partition p = constrained_spectral_partition(net, groups_of({{0}, {7}}));
  EXPECT_EQ(p.assignment, (std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1}));
}

TEST(ConstrainedSpectral, GroupsCoveringAllBusesAreReturnedVerbatim) {
  const Network net = testing::toy_cycle();
  const Partition p = constrained_spectral_partition(net, groups_of({{0, 3}, {1, 2}}));
  EXPECT_EQ(p.assignment, (std::vector<int>{0, 1, 1, 0}));
}

TEST(ConstrainedSpectral, SharedBusIsRejected) {
  const Network net = testing::toy_cycle();
  EXPECT_THROW(constrained_spectral_partition(net, groups_of({{0, 1}, {1, 2}})), InvalidArgument);
}

TEST(TwoStage, InvariantsHoldOnRandomInstances) {
  std::mt19937_64 rng(8);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Network net = random_network({8 + static_cast<int>(rng() % 12), 0, rng(), true});
    const int k = 2 + static_cast<int>(rng() % 2);
    const CoherencyGroups groups = random_groups(net, k, 2, rng());
    try {
      const TreePartitionSolution sol = two_stage(net, groups);
      EXPECT_TRUE(solution_problems(net, groups, sol).empty());
      EXPECT_TRUE(clusters_connected(net, sol.partition));
      EXPECT_EQ(sol.method, Method::kTwoStage);
      ++solved;
    } catch (const InfeasibleError&) {
      // Allowed: the heuristic reports failure instead of relaxing groups.
    }
  }
  // About 40% of these random groupings admit no tree partition at all.
  EXPECT_GE(solved, 30);
}

TEST(TwoStage, NeverBeatsTheExactOptimum) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = random_network({12, 18, rng(), true});
    const CoherencyGroups groups = random_groups(net, 3, 2, rng());
    try {
      const double heuristic = two_stage(net, groups).disruption_mw;
      const double exact = solve_builtin(net, groups).first.disruption_mw;
      EXPECT_GE(heuristic, exact - 1e-6);
    } catch (const InfeasibleError&) {
    }
  }
}

TEST(TwoStage, DeterministicForSameInput) {
  int compared = 0;
  for (std::uint64_t seed = 1; compared < 5 && seed < 50; ++seed) {
    const Network net = random_network({16, 24, seed, true});
    const CoherencyGroups groups = random_groups(net, 3, 2, seed);
    TreePartitionSolution a;
    try {
      a = two_stage(net, groups);
    } catch (const InfeasibleError&) {
      continue;
    }
    const TreePartitionSolution b = two_stage(net, groups);
    EXPECT_EQ(a.partition, b.partition);
    EXPECT_EQ(a.switched, b.switched);
    ++compared;
  }
  EXPECT_EQ(compared, 5);
}

}  // namespace
}  // namespace treepart
